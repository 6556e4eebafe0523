#pragma once

#include "aigac/classify.hpp"
#include "aigac/structure.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aigac {

using BigInt = boost::multiprecision::cpp_int;

struct CountingOptions {
    /// Decision-diagram size cap, per group of attackers sharing components,
    /// before falling back to sampling.
    std::size_t node_budget = 1'000'000;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
};

struct SampleInfo {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const SampleInfo&, const SampleInfo&) = default;
};

struct BreakCount {
    BigInt count;
    /// Set when the count is a Monte-Carlo estimate.
    std::optional<SampleInfo> sampled;
};

/// |{A ⊆ U : ∃B ∈ minimal, B ⊆ A}|. Attackers are split into groups that
/// share no component; each group is counted exactly with a reduced ordered
/// decision diagram. The whole count is estimated by uniform sampling when
/// some diagram outgrows options.node_budget.
BreakCount count_breaking(std::span<const ComponentSet> minimal, const ComponentSet& universe,
                          const CountingOptions& options = {});

/// Monte-Carlo estimate with `samples` uniform draws over the support.
BreakCount count_breaking_sampled(std::span<const ComponentSet> minimal, const ComponentSet& universe,
                                  std::uint64_t samples, std::uint64_t seed);

/// Attackers determined safe: all of 2^|U| when unbreakable, otherwise every
/// attacker whose restriction to `cone` is a known failing set (components
/// outside the cone are free).
BigInt count_safe(bool unbreakable, std::span<const ComponentSet> failing, const ComponentSet& cone,
                  const ComponentSet& universe);

struct CoverageResult {
    std::size_t requirement = 0;
    BigInt n_break;
    BigInt n_safe;
    std::size_t universe_bits = 0;
    /// (n_break + n_safe) / 2^universe_bits
    double coverage = 0;
    std::optional<SampleInfo> sampled;
};

CoverageResult coverage(const RequirementResult& result, const ComponentSet& universe,
                        const CountingOptions& options = {});

/// num / 2^bits without overflowing doubles for large `bits`.
double scaled_ratio(const BigInt& num, std::size_t bits);

/// One row of the per-requirement report.
struct RequirementMetrics {
    std::size_t requirement = 0;
    std::size_t steps = 0;
    double ms = 0;
    std::size_t n_cone = 0;
    std::size_t n_min = 0;
    std::size_t n_sat_calls = 0;
    /// Mean minimal-attacker size; absent without minimal attackers.
    std::optional<double> avg_min_size;
    double coverage = 0;
    bool incomplete = false;
    bool sampled = false;
};

RequirementMetrics metrics_row(const RequirementResult& result, const CoverageResult& coverage, std::size_t steps);

/// Arithmetic means over requirements; avg_min_size averages the rows that
/// have one.
struct AverageMetrics {
    std::size_t steps = 0;
    std::size_t rows = 0;
    double ms = 0;
    double n_cone = 0;
    double n_min = 0;
    double n_sat_calls = 0;
    std::optional<double> avg_min_size;
    double coverage = 0;
};

AverageMetrics average(std::span<const RequirementMetrics> rows, std::size_t steps);

}  // namespace aigac
