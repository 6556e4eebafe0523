#pragma once

#include "aigac/cnf.hpp"
#include "aigac/sat.hpp"
#include "aigac/structure.hpp"
#include "aigac/witness.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

namespace aigac {

struct Options {
    std::size_t steps = 10;
    /// Largest attacker size explored (z).
    std::size_t max_size = 3;
    /// Wall-clock budget per requirement, checked between solver calls.
    std::optional<std::chrono::duration<double>> budget = std::chrono::duration<double>(600.0);
    bool isolation = true;
    bool monotonicity = true;
    Universe universe = Universe::latches_only;
    double cluster_threshold = 0.8;
    /// Per-call conflict cap; exhausting it makes the call indeterminate.
    std::optional<std::uint64_t> conflict_limit;
    /// Replay every SAT witness on the simulator; a mismatch throws.
    bool check_witnesses = true;
    /// External DIMACS solver instead of the embedded one.
    std::optional<std::filesystem::path> external_solver;
    std::size_t jobs = 1;
};

struct CheckResult {
    sat::Outcome outcome = sat::Outcome::indeterminate;
    std::optional<Witness> witness;
};

/// One unrolled instance and solver for a cluster of requirements.
class ClusterSession {
public:
    ClusterSession(const StructureAnalysis& analysis, std::span<const std::size_t> cluster, const Options& options,
                   const ComponentSet& universe);

    /// Can `attacker` break `requirement` within the bound? SAT answers carry
    /// a witness (replayed when options.check_witnesses is set).
    CheckResult check(std::size_t requirement, const ComponentSet& attacker);

    const UnrolledInstance& instance() const { return instance_; }
    std::size_t sat_calls() const { return sat_calls_; }
    std::size_t witness_checks() const { return witness_checks_; }

private:
    const Options* options_;
    UnrolledInstance instance_;
    std::unique_ptr<sat::Backend> backend_;
    std::size_t sat_calls_ = 0;
    std::size_t witness_checks_ = 0;
};

/// Search outcome for one requirement.
struct RequirementResult {
    std::size_t requirement = 0;
    /// Universe ∩ ▼(r), i.e. r^max under the configured universe.
    ComponentSet cone;
    /// Components single attackers are grown from: the cone with isolation,
    /// the whole universe without.
    ComponentSet candidates;
    /// Minimal attackers (antichain), in discovery order.
    std::vector<ComponentSet> minimal;
    std::vector<Witness> witnesses;  // parallel to `minimal`
    /// Attackers proven unable to break the requirement.
    std::vector<ComponentSet> failing;
    bool unbreakable = false;
    bool broken_by_empty = false;
    bool incomplete = false;
    std::size_t sat_calls = 0;
    std::size_t skipped = 0;
    std::size_t non_minimal_successes = 0;
    std::size_t witness_checks = 0;
    std::chrono::duration<double> elapsed{0};
};

/// Minimal-attacker search for one requirement: existence check on the
/// candidate set, then a size-ordered walk up from the empty attacker that
/// expands only failing attackers and stops at `max_size`.
RequirementResult minimal_attackers(ClusterSession& session, const StructureAnalysis& analysis,
                                    std::size_t requirement, const Options& options, const ComponentSet& universe);

using AttackerMap = std::map<ComponentSet, std::set<std::size_t>>;

struct Classification {
    ComponentSet universe;
    std::vector<Cluster> clusters;
    std::vector<RequirementResult> results;  // indexed by requirement
    /// Union of all minimal attackers.
    std::set<ComponentSet> all_minimal;
    /// Minimal attacker -> requirements it minimally breaks.
    AttackerMap initial;

    bool incomplete() const;
    std::size_t sat_calls() const;
};

/// Runs the minimal-attacker search for every requirement, cluster by
/// cluster. Clusters run on up to options.jobs threads.
Classification all_minimal_attackers(const StructureAnalysis& analysis, const Options& options);

/// Attacker -> broken requirements over a universe. Universes of at most
/// `explicit_limit` components are tabulated for every subset; larger ones
/// answer queries from the minimal attackers.
class ClassificationMap {
public:
    static constexpr std::size_t explicit_limit = 20;

    ClassificationMap(ComponentSet universe, std::size_t num_requirements);

    const ComponentSet& universe() const { return universe_; }
    std::size_t num_requirements() const { return num_requirements_; }
    bool is_explicit() const { return explicit_; }

    bool breaks(const ComponentSet& attacker, std::size_t requirement) const;
    std::set<std::size_t> broken(const ComponentSet& attacker) const;

    /// Every subset of the universe with its broken requirements (explicit
    /// maps only).
    AttackerMap entries() const;

    /// Marks (attacker, requirement) in an explicit table; used by the naive
    /// classifier.
    void set(const ComponentSet& attacker, std::size_t requirement);

    friend bool operator==(const ClassificationMap& a, const ClassificationMap& b);

private:
    friend ClassificationMap propagate(const std::set<ComponentSet>&, const AttackerMap&, const ComponentSet&,
                                       std::size_t);

    std::uint64_t mask_of(const ComponentSet& attacker) const;

    ComponentSet universe_;
    std::size_t num_requirements_ = 0;
    bool explicit_ = false;
    std::vector<bool> table_;                           // mask * R + r
    std::vector<std::vector<ComponentSet>> minimal_;   // implicit form
};

/// Monotone closure: H(A) = ∪ {H0(A') : A' ∈ all_minimal, A' ⊆ A}.
ClassificationMap propagate(const std::set<ComponentSet>& all_minimal, const AttackerMap& initial,
                            const ComponentSet& universe, std::size_t num_requirements);

inline ClassificationMap propagate(const Classification& c, std::size_t num_requirements)
{
    return propagate(c.all_minimal, c.initial, c.universe, num_requirements);
}

struct NaiveResult {
    ClassificationMap map;
    std::size_t sat_calls = 0;
    bool incomplete = false;
};

/// One solver call per (attacker, requirement) over every subset of the
/// universe, on full unrollings without isolation or monotonicity. Throws
/// BudgetError when the universe exceeds ClassificationMap::explicit_limit.
NaiveResult naive_classify(const StructureAnalysis& analysis, const Options& options);

enum class Verdict { breaks, safe, unknown };

const char* to_string(Verdict verdict);

/// What the stored search results determine about `attacker` without new
/// solver calls: breaks if it contains a minimal attacker, safe if the
/// requirement is unbreakable or the attacker's cone part is a known failing
/// set, unknown otherwise.
Verdict determine(const RequirementResult& result, const ComponentSet& attacker);

}  // namespace aigac
