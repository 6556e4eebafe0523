#pragma once

#include "aigac/aig.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace aigac {

struct ParseOptions {
    /// Treat listed bad/output literals as the good literal of the invariant
    /// instead of its negation (the HWMCC convention).
    bool outputs_are_good = false;
};

/// AIGER 1.9 ASCII ("aag"). Requirements come from the B section when it is
/// non-empty, otherwise from the O section. C/J/F sections are rejected.
Aig parse_ascii(std::string_view text, const ParseOptions& options = {});

/// AIGER 1.9 binary ("aig") with delta-encoded AND gates.
Aig parse_binary(std::string_view bytes, const ParseOptions& options = {});

/// Dispatches on the "aag"/"aig" magic.
Aig parse_aiger(std::string_view bytes, const ParseOptions& options = {});
Aig read_aiger_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Requirements are written as bad-state literals (negated good literal), so
/// parse_ascii with default options recovers them unchanged.
std::string serialize_ascii(const Aig& aig);

/// Binary form. Variables are renumbered canonically (inputs, latches, then
/// gates in topological order); an Aig that is already canonical round-trips.
std::string serialize_binary(const Aig& aig);

}  // namespace aigac
