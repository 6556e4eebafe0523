#include "aigac/structure.hpp"

#include <algorithm>
#include <iterator>

namespace aigac {

ComponentSet::ComponentSet(std::initializer_list<ComponentId> ids) : ComponentSet(std::vector<ComponentId>(ids)) {}

ComponentSet::ComponentSet(std::vector<ComponentId> ids) : ids_(std::move(ids))
{
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool ComponentSet::insert(ComponentId id)
{
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it != ids_.end() && *it == id)
        return false;
    ids_.insert(it, id);
    return true;
}

bool ComponentSet::erase(ComponentId id)
{
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id)
        return false;
    ids_.erase(it);
    return true;
}

bool ComponentSet::contains(ComponentId id) const
{
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool ComponentSet::is_subset_of(const ComponentSet& other) const
{
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

bool ComponentSet::intersects(const ComponentSet& other) const
{
    auto a = ids_.begin();
    auto b = other.ids_.begin();
    while (a != ids_.end() && b != other.ids_.end()) {
        if (*a == *b)
            return true;
        if (*a < *b)
            ++a;
        else
            ++b;
    }
    return false;
}

ComponentSet ComponentSet::with(ComponentId id) const
{
    ComponentSet out = *this;
    out.insert(id);
    return out;
}

std::string ComponentSet::to_string() const
{
    std::string out = "{";
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (i)
            out += ',';
        out += ids_[i].to_string();
    }
    return out + "}";
}

ComponentSet unite(const ComponentSet& a, const ComponentSet& b)
{
    std::vector<ComponentId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return ComponentSet(std::move(out));
}

ComponentSet intersect(const ComponentSet& a, const ComponentSet& b)
{
    std::vector<ComponentId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return ComponentSet(std::move(out));
}

ComponentSet subtract(const ComponentSet& a, const ComponentSet& b)
{
    std::vector<ComponentId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return ComponentSet(std::move(out));
}

ComponentSet universe_components(const Aig& aig, Universe universe)
{
    std::vector<ComponentId> ids;
    for (std::uint32_t i = 0; i < aig.num_latches(); ++i)
        ids.push_back(latch_id(i));
    if (universe == Universe::latches_and_gates)
        for (std::uint32_t i = 0; i < aig.num_gates(); ++i)
            ids.push_back(gate_id(i));
    return ComponentSet(std::move(ids));
}

StructureAnalysis::StructureAnalysis(const Aig& aig) : aig_(&aig), fanout_(std::size_t{aig.max_var()} + 1)
{
    auto edge = [&](Literal from, std::uint32_t to) {
        if (!from.is_constant())
            fanout_[from.var()].push_back(to);
    };
    for (const auto& g : aig.gates()) {
        edge(g.rhs0, g.var);
        if (g.rhs1.var() != g.rhs0.var())
            edge(g.rhs1, g.var);
    }
    for (const auto& l : aig.latches())
        edge(l.next, l.var);
}

ComponentSet StructureAnalysis::coi(Literal lit) const
{
    if (lit.is_constant())
        return {};
    const auto root = lit.var();
    {
        std::lock_guard lock(memo_mutex_);
        if (auto it = memo_.find(root); it != memo_.end())
            return it->second;
    }

    const auto& aig = *aig_;
    std::vector<bool> seen(std::size_t{aig.max_var()} + 1, false);
    std::vector<std::uint32_t> stack{root};
    std::vector<ComponentId> members;
    seen[root] = true;
    auto push = [&](Literal l) {
        if (!l.is_constant() && !seen[l.var()]) {
            seen[l.var()] = true;
            stack.push_back(l.var());
        }
    };
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        auto id = aig.component(v);
        if (!id)
            continue;
        members.push_back(*id);
        if (id->kind == ComponentKind::latch) {
            push(aig.latches()[id->index].next);
        } else if (id->kind == ComponentKind::gate) {
            push(aig.gates()[id->index].rhs0);
            push(aig.gates()[id->index].rhs1);
        }
    }
    ComponentSet result(std::move(members));
    std::lock_guard lock(memo_mutex_);
    return memo_.emplace(root, std::move(result)).first->second;
}

ComponentSet StructureAnalysis::requirement_coi(std::size_t requirement) const
{
    return coi(aig_->requirements()[requirement].good);
}

ComponentSet StructureAnalysis::ioc(ComponentId id) const
{
    const auto& aig = *aig_;
    std::vector<bool> seen(std::size_t{aig.max_var()} + 1, false);
    auto root = aig.var(id);
    std::vector<std::uint32_t> stack{root};
    std::vector<ComponentId> members;
    seen[root] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        members.push_back(*aig.component(v));
        for (auto w : fanout_[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return ComponentSet(std::move(members));
}

ComponentSet StructureAnalysis::ioc(const ComponentSet& attacker) const
{
    ComponentSet out;
    for (auto id : attacker)
        out = unite(out, ioc(id));
    return out;
}

ComponentSet StructureAnalysis::sources(Literal lit) const
{
    std::vector<ComponentId> out;
    for (auto id : coi(lit))
        if (id.kind != ComponentKind::gate)
            out.push_back(id);
    return ComponentSet(std::move(out));
}

Ratio StructureAnalysis::jaccard(Literal a, Literal b) const
{
    auto sa = sources(a);
    auto sb = sources(b);
    auto common = intersect(sa, sb).size();
    auto all = unite(sa, sb).size();
    if (all == 0)
        return {1, 1};
    return {common, all};
}

ComponentSet StructureAnalysis::r_max(std::size_t requirement, Universe universe) const
{
    std::vector<ComponentId> out;
    for (auto id : requirement_coi(requirement)) {
        if (id.kind == ComponentKind::latch ||
            (id.kind == ComponentKind::gate && universe == Universe::latches_and_gates))
            out.push_back(id);
    }
    return ComponentSet(std::move(out));
}

std::vector<Cluster> StructureAnalysis::cluster_requirements(std::span<const std::size_t> requirements,
                                                             double threshold) const
{
    threshold = std::clamp(threshold, 0.0, 1.0);
    const auto reqs = aig_->requirements();
    std::vector<std::size_t> source_count(requirements.size());
    for (std::size_t i = 0; i < requirements.size(); ++i)
        source_count[i] = sources(reqs[requirements[i]].good).size();

    std::vector<bool> assigned(requirements.size(), false);
    std::vector<Cluster> clusters;
    for (std::size_t remaining = requirements.size(); remaining > 0;) {
        std::size_t seed = requirements.size();
        for (std::size_t i = 0; i < requirements.size(); ++i)
            if (!assigned[i] && (seed == requirements.size() || source_count[i] > source_count[seed]))
                seed = i;
        Cluster cluster;
        const auto seed_lit = reqs[requirements[seed]].good;
        for (std::size_t i = 0; i < requirements.size(); ++i) {
            if (assigned[i])
                continue;
            auto j = jaccard(seed_lit, reqs[requirements[i]].good);
            if (i == seed || static_cast<double>(j.num) >= threshold * static_cast<double>(j.den) - 1e-12) {
                assigned[i] = true;
                --remaining;
                cluster.requirements.push_back(requirements[i]);
                cluster.cone = unite(cluster.cone, requirement_coi(requirements[i]));
            }
        }
        std::sort(cluster.requirements.begin(), cluster.requirements.end());
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

}  // namespace aigac
