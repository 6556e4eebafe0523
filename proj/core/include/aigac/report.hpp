#pragma once

#include "aigac/classify.hpp"
#include "aigac/coverage.hpp"
#include "aigac/structure.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aigac {

const char* version();
/// `git describe` of the source tree this library was built from.
const char* git_describe();

enum class OutputFormat { json, csv };

/// Effective settings of one run; echoed into every JSON report.
struct RunConfig {
    std::string input;
    std::string command;
    std::size_t steps = 10;
    std::size_t max_size = 3;
    /// Seconds per requirement; nullopt means unlimited.
    std::optional<double> budget_seconds = 600.0;
    bool isolation = true;
    bool monotonicity = true;
    Universe universe = Universe::latches_only;
    double cluster_threshold = 0.8;
    /// "embedded", or the path of an external DIMACS solver.
    std::string solver = "embedded";
    OutputFormat format = OutputFormat::json;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool outputs_are_good = false;
    /// When false, wall-clock fields are written as 0 so reruns are
    /// byte-identical.
    bool timings = true;
};

Options to_options(const RunConfig& config);
CountingOptions counting_options(const RunConfig& config);

const char* to_string(Universe universe);
std::optional<Universe> parse_universe(std::string_view text);

/// Exact CSV header of the metrics table.
inline constexpr std::string_view metrics_header = "Steps,ms,#C.,#Min.,#SAT,#C./Min.,Cov.";

/// Everything one classification run produced, ready to be rendered.
struct RunReport {
    RunConfig config;
    Classification classification;
    std::vector<CoverageResult> coverage;     // indexed by requirement
    std::vector<RequirementMetrics> metrics;  // indexed by requirement
    double elapsed_ms = 0;
};

RunReport run_classification(const StructureAnalysis& analysis, const RunConfig& config);

std::string render_config_json(const RunConfig& config);

/// {"<requirement>": [["v1"], ["g2"]], ...}
std::string render_minimal_attackers(const Aig& aig, const Classification& classification);

/// Universe, per-requirement search state (cone, minimal and failing
/// families, flags, coverage counts) and, for small universes, the explicit
/// attacker map.
std::string render_classification(const Aig& aig, const RunReport& report);

std::string render_witnesses(const Aig& aig, const RunReport& report);

std::string render_run(const RunReport& report);

/// Averages rows, one per step bound, under metrics_header.
std::string render_metrics_csv(std::span<const AverageMetrics> rows, bool timings);

/// Per-requirement rows: "Requirement," + metrics_header + ",Incomplete".
std::string render_requirements_csv(const Aig& aig, std::span<const RequirementMetrics> rows, bool timings);

/// Cones, sources and the pairwise Jaccard matrix of all requirements.
std::string render_coi(const StructureAnalysis& analysis, OutputFormat format);

/// Plain-text circuit summary.
std::string render_info(const StructureAnalysis& analysis);

/// Search results reloaded from classification JSON for offline queries.
struct StoredClassification {
    ComponentSet universe;
    std::vector<std::string> names;
    std::vector<RequirementResult> results;

    std::optional<std::size_t> find(std::string_view name) const;
};

StoredClassification parse_classification(std::string_view json);

/// Comma-separated component list ("v1,g2"); empty text is the empty
/// attacker. Throws std::invalid_argument on malformed ids.
ComponentSet parse_attacker(std::string_view text);

}  // namespace aigac
