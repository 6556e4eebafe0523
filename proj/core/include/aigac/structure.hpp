#pragma once

#include "aigac/aig.hpp"

#include <initializer_list>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace aigac {

/// Sorted, duplicate-free set of components. Iteration order is by kind
/// (inputs, latches, gates) and then by index.
class ComponentSet {
public:
    ComponentSet() = default;
    ComponentSet(std::initializer_list<ComponentId> ids);
    explicit ComponentSet(std::vector<ComponentId> ids);

    bool insert(ComponentId id);
    bool erase(ComponentId id);
    bool contains(ComponentId id) const;

    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }
    ComponentId operator[](std::size_t i) const { return ids_[i]; }
    std::span<const ComponentId> ids() const { return ids_; }

    bool is_subset_of(const ComponentSet& other) const;
    bool intersects(const ComponentSet& other) const;
    ComponentSet with(ComponentId id) const;

    /// "{v1,g2}"
    std::string to_string() const;

    friend auto operator<=>(const ComponentSet&, const ComponentSet&) = default;

private:
    std::vector<ComponentId> ids_;
};

ComponentSet unite(const ComponentSet& a, const ComponentSet& b);
ComponentSet intersect(const ComponentSet& a, const ComponentSet& b);
ComponentSet subtract(const ComponentSet& a, const ComponentSet& b);

/// Strict weak order used for attacker frontiers: smaller sets first, ties
/// broken lexicographically by component id.
struct SizeThenLex {
    bool operator()(const ComponentSet& a, const ComponentSet& b) const
    {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    }
};

/// Which components an attacker may be built from.
enum class Universe { latches_only, latches_and_gates };

ComponentSet universe_components(const Aig& aig, Universe universe);

/// Exact fraction; den is never zero.
struct Ratio {
    std::size_t num = 0;
    std::size_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
};

struct Cluster {
    std::vector<std::size_t> requirements;
    ComponentSet cone;
};

/// Cone-of-influence queries over one Aig. Cones are memoised per variable;
/// the memo is guarded, so a single analysis may be shared across threads.
class StructureAnalysis {
public:
    explicit StructureAnalysis(const Aig& aig);

    const Aig& aig() const { return *aig_; }

    /// All components the literal transitively depends on (through gate
    /// operands and latch next-state functions), itself included.
    ComponentSet coi(Literal lit) const;
    ComponentSet requirement_coi(std::size_t requirement) const;

    /// Components whose cone contains `id`.
    ComponentSet ioc(ComponentId id) const;
    ComponentSet ioc(const ComponentSet& attacker) const;

    /// Inputs and latches in the cone.
    ComponentSet sources(Literal lit) const;

    /// |src(a) ∩ src(b)| / |src(a) ∪ src(b)|, 1 when both are empty.
    Ratio jaccard(Literal a, Literal b) const;

    /// Non-input components of the requirement's cone, restricted to the
    /// universe: the most capable relevant attacker.
    ComponentSet r_max(std::size_t requirement, Universe universe) const;

    /// Greedy grouping: seed with the unassigned requirement that has the most
    /// sources, absorb every unassigned requirement whose Jaccard index with
    /// the seed is at least `threshold` (clamped to [0, 1]).
    std::vector<Cluster> cluster_requirements(std::span<const std::size_t> requirements, double threshold) const;

private:
    const Aig* aig_;
    std::vector<std::vector<std::uint32_t>> fanout_;
    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<std::uint32_t, ComponentSet> memo_;
};

}  // namespace aigac
