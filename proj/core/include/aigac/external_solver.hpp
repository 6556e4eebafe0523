#pragma once

#include "aigac/sat.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aigac::sat {

struct Dimacs {
    Var num_vars = 0;
    std::vector<std::vector<Lit>> clauses;
};

/// Parses DIMACS CNF. Comment lines are skipped; the clause count in the
/// problem line must match the body.
Dimacs parse_dimacs(std::string_view text);

std::string write_dimacs(Var num_vars, std::span<const std::vector<Lit>> clauses);

struct ExternalResult {
    Outcome outcome = Outcome::indeterminate;
    Model model;  // filled for SAT; unmentioned variables are false
};

/// Runs `solver` on `dimacs` with every assumption appended as a unit clause.
/// The solver must follow the competition protocol: "s SATISFIABLE" /
/// "s UNSATISFIABLE" plus "v" lines, exit code 10/20 (or 0).
ExternalResult solve_external(const std::filesystem::path& solver, std::string_view dimacs,
                              std::span<const Lit> assumptions = {});

/// Solver path from the AIGAC_SAT_SOLVER environment variable, if set.
std::optional<std::filesystem::path> external_solver_from_env();

/// Backend that buffers clauses and ships the whole formula to the external
/// process on every solve.
std::unique_ptr<Backend> make_external_backend(std::filesystem::path solver);

}  // namespace aigac::sat
