#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace aigac::sat {

/// 0-based solver variable.
using Var = std::int32_t;

class Lit {
public:
    constexpr Lit() = default;

    static constexpr Lit make(Var v, bool negated = false)
    {
        return Lit{static_cast<std::uint32_t>(2 * v) + (negated ? 1u : 0u)};
    }
    /// DIMACS literal (1-based, sign = polarity).
    static Lit from_dimacs(int value);

    constexpr Var var() const { return static_cast<Var>(x_ >> 1); }
    constexpr bool negated() const { return (x_ & 1u) != 0; }
    constexpr std::uint32_t index() const { return x_; }
    int to_dimacs() const { return negated() ? -(var() + 1) : var() + 1; }

    constexpr Lit operator~() const { return Lit{x_ ^ 1u}; }
    friend constexpr auto operator<=>(Lit, Lit) = default;

private:
    constexpr explicit Lit(std::uint32_t x) : x_(x) {}
    std::uint32_t x_ = 0;
};

enum class Outcome { sat, unsat, indeterminate };

const char* to_string(Outcome outcome);

/// Per-call caps. Exhausting either yields Outcome::indeterminate, which
/// callers must treat as "unknown".
struct Limits {
    std::optional<std::uint64_t> conflicts;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct Stats {
    std::uint64_t solves = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
    std::uint64_t learnt_literals = 0;
};

/// Full assignment after a satisfiable call, indexed by variable.
using Model = std::vector<bool>;

/// Incremental CDCL solver. Assumptions are decided first, in the order
/// given; learnt clauses persist across calls.
class Solver {
public:
    Solver();
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) noexcept;

    Var new_var();
    void reserve_vars(Var count);
    Var num_vars() const;

    /// Returns false once the clause set is known to be unsatisfiable.
    /// Tautologies are ignored; the empty clause makes every later call UNSAT.
    bool add_clause(std::span<const Lit> lits);
    bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

    Outcome solve(std::span<const Lit> assumptions = {}, const Limits& limits = {});
    Outcome solve(std::initializer_list<Lit> assumptions, const Limits& limits = {})
    {
        return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()), limits);
    }

    /// Valid after Outcome::sat.
    const Model& model() const;
    bool model_value(Lit lit) const;

    /// After Outcome::unsat: assumptions sufficient for unsatisfiability.
    /// Empty when the clause set is unsatisfiable on its own.
    const std::vector<Lit>& core() const;

    bool okay() const;
    const Stats& stats() const;
    std::size_t num_clauses() const;
    std::size_t num_learnts() const;

    /// Re-check every SAT model against the original clauses (test builds).
    void set_check_models(bool enabled);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Uniform interface over the embedded solver and external processes.
class Backend {
public:
    virtual ~Backend() = default;

    virtual Var new_var() = 0;
    virtual Var num_vars() const = 0;
    virtual void add_clause(std::span<const Lit> lits) = 0;
    virtual Outcome solve(std::span<const Lit> assumptions, const Limits& limits) = 0;
    virtual const Model& model() const = 0;
};

std::unique_ptr<Backend> make_embedded_backend(bool check_models = false);

}  // namespace aigac::sat
