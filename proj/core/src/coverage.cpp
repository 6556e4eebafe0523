#include "aigac/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace aigac {

namespace {

struct DiagramFull {};

/// Minimal ROBDD manager for monotone DNFs: only OR of cubes is needed.
class Diagram {
public:
    static constexpr std::uint32_t zero = 0;
    static constexpr std::uint32_t one = 1;

    Diagram(std::uint32_t num_vars, std::size_t budget) : num_vars_(num_vars), budget_(budget)
    {
        nodes_.push_back({num_vars, 0, 0});
        nodes_.push_back({num_vars, 1, 1});
    }

    std::uint32_t make(std::uint32_t var, std::uint32_t lo, std::uint32_t hi)
    {
        if (lo == hi)
            return lo;
        Key key{var, lo, hi};
        auto it = unique_.find(key);
        if (it != unique_.end())
            return it->second;
        if (nodes_.size() >= budget_)
            throw DiagramFull{};
        nodes_.push_back({var, lo, hi});
        auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
        unique_.emplace(key, id);
        return id;
    }

    // Cube over sorted variable indices.
    std::uint32_t cube(std::span<const std::uint32_t> vars)
    {
        std::uint32_t node = one;
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            node = make(*it, zero, node);
        return node;
    }

    std::uint32_t disjoin(std::uint32_t a, std::uint32_t b)
    {
        if (a == one || b == one)
            return one;
        if (a == zero)
            return b;
        if (b == zero || a == b)
            return a;
        if (a > b)
            std::swap(a, b);
        std::uint64_t key = (std::uint64_t{a} << 32) | b;
        if (auto it = or_cache_.find(key); it != or_cache_.end())
            return it->second;
        const Node na = nodes_[a];
        const Node nb = nodes_[b];
        std::uint32_t var = std::min(na.var, nb.var);
        std::uint32_t lo = disjoin(na.var == var ? na.lo : a, nb.var == var ? nb.lo : b);
        std::uint32_t hi = disjoin(na.var == var ? na.hi : a, nb.var == var ? nb.hi : b);
        std::uint32_t r = make(var, lo, hi);
        or_cache_.emplace(key, r);
        return r;
    }

    /// Satisfying assignments over all num_vars variables.
    BigInt count(std::uint32_t root)
    {
        std::vector<std::optional<BigInt>> memo(nodes_.size());
        return count_from(root, memo) << nodes_[root].var;
    }

private:
    struct Node {
        std::uint32_t var;
        std::uint32_t lo;
        std::uint32_t hi;
    };
    struct Key {
        std::uint32_t var, lo, hi;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const
        {
            std::uint64_t h = k.var;
            h = h * 0x9E3779B97F4A7C15ull ^ k.lo;
            h = h * 0x9E3779B97F4A7C15ull ^ k.hi;
            return static_cast<std::size_t>(h ^ (h >> 29));
        }
    };

    // Assignments to variables node.var .. num_vars-1.
    BigInt count_from(std::uint32_t id, std::vector<std::optional<BigInt>>& memo)
    {
        if (id == zero)
            return 0;
        if (id == one)
            return 1;
        if (memo[id])
            return *memo[id];
        const Node n = nodes_[id];
        BigInt lo = count_from(n.lo, memo) << (nodes_[n.lo].var - n.var - 1);
        BigInt hi = count_from(n.hi, memo) << (nodes_[n.hi].var - n.var - 1);
        memo[id] = lo + hi;
        return *memo[id];
    }

    std::uint32_t num_vars_;
    std::size_t budget_;
    std::vector<Node> nodes_;
    std::unordered_map<Key, std::uint32_t, KeyHash> unique_;
    std::unordered_map<std::uint64_t, std::uint32_t> or_cache_;
};

ComponentSet support_of(std::span<const ComponentSet> minimal, const ComponentSet& universe)
{
    ComponentSet support;
    for (const auto& m : minimal) {
        if (!m.is_subset_of(universe))
            throw std::invalid_argument("minimal attacker " + m.to_string() + " is not inside the universe");
        support = unite(support, m);
    }
    return support;
}

std::vector<std::uint32_t> positions(const ComponentSet& set, const ComponentSet& within)
{
    std::vector<std::uint32_t> out;
    auto ids = within.ids();
    for (auto id : set)
        out.push_back(static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin()));
    return out;
}

}  // namespace

BreakCount count_breaking_sampled(std::span<const ComponentSet> minimal, const ComponentSet& universe,
                                  std::uint64_t samples, std::uint64_t seed)
{
    if (samples == 0)
        throw std::invalid_argument("sample count must be positive");
    auto support = support_of(minimal, universe);
    const std::size_t words = (support.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> cubes;
    for (const auto& m : minimal) {
        std::vector<std::uint64_t> bits(words, 0);
        for (auto p : positions(m, support))
            bits[p / 64] |= std::uint64_t{1} << (p % 64);
        cubes.push_back(std::move(bits));
    }
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> draw(words);
    std::uint64_t hits = 0;
    const std::size_t tail = support.size() % 64;
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (auto& w : draw)
            w = rng();
        if (tail != 0)
            draw.back() &= (std::uint64_t{1} << tail) - 1;
        for (const auto& c : cubes) {
            bool inside = true;
            for (std::size_t i = 0; i < words && inside; ++i)
                inside = (c[i] & ~draw[i]) == 0;
            if (inside) {
                ++hits;
                break;
            }
        }
    }
    BigInt count = (BigInt(hits) << universe.size()) / samples;
    return {count, SampleInfo{samples, seed}};
}

BreakCount count_breaking(std::span<const ComponentSet> minimal, const ComponentSet& universe,
                          const CountingOptions& options)
{
    if (minimal.empty())
        return {BigInt(0), std::nullopt};
    auto support = support_of(minimal, universe);
    const BigInt all = BigInt(1) << universe.size();
    std::vector<std::vector<std::uint32_t>> cubes;
    for (const auto& m : minimal) {
        if (m.empty())
            return {all, std::nullopt};
        cubes.push_back(positions(m, support));
    }

    // Attackers sharing no component are independent: an attacker avoids the
    // family iff it avoids every group, so avoiding counts multiply.
    std::vector<std::uint32_t> parent(support.size());
    for (std::uint32_t i = 0; i < parent.size(); ++i)
        parent[i] = i;
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& c : cubes)
        for (auto v : c)
            parent[find(v)] = find(c.front());
    std::map<std::uint32_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < cubes.size(); ++i)
        groups[find(cubes[i].front())].push_back(i);

    BigInt avoiding = 1;
    try {
        for (const auto& [root_var, members] : groups) {
            // Variables in order of first appearance keep co-occurring ones adjacent.
            std::unordered_map<std::uint32_t, std::uint32_t> local;
            for (auto i : members)
                for (auto v : cubes[i])
                    local.emplace(v, static_cast<std::uint32_t>(local.size()));
            const auto n = static_cast<std::uint32_t>(local.size());
            Diagram dd(n, options.node_budget);
            std::uint32_t root = Diagram::zero;
            for (auto i : members) {
                std::vector<std::uint32_t> vars;
                for (auto v : cubes[i])
                    vars.push_back(local.at(v));
                std::sort(vars.begin(), vars.end());
                root = dd.disjoin(root, dd.cube(vars));
            }
            avoiding *= (BigInt(1) << n) - dd.count(root);
        }
    } catch (const DiagramFull&) {
        return count_breaking_sampled(minimal, universe, options.samples, options.seed);
    }
    return {all - (avoiding << (universe.size() - support.size())), std::nullopt};
}

BigInt count_safe(bool unbreakable, std::span<const ComponentSet> failing, const ComponentSet& cone,
                  const ComponentSet& universe)
{
    if (unbreakable)
        return BigInt(1) << universe.size();
    std::set<ComponentSet> restricted;
    for (const auto& f : failing)
        restricted.insert(intersect(f, cone));
    const std::size_t free_bits = universe.size() - intersect(universe, cone).size();
    return BigInt(restricted.size()) << free_bits;
}

double scaled_ratio(const BigInt& num, std::size_t bits)
{
    if (num <= 0)
        return 0.0;
    const auto msb = static_cast<long>(boost::multiprecision::msb(num));
    const long shift = std::max(0L, msb - 62);
    double mantissa = static_cast<BigInt>(num >> shift).convert_to<double>();
    return std::ldexp(mantissa, static_cast<int>(shift - static_cast<long>(bits)));
}

CoverageResult coverage(const RequirementResult& result, const ComponentSet& universe,
                        const CountingOptions& options)
{
    CoverageResult out;
    out.requirement = result.requirement;
    out.universe_bits = universe.size();
    auto breaking = count_breaking(result.minimal, universe, options);
    out.n_break = breaking.count;
    out.sampled = breaking.sampled;
    out.n_safe = count_safe(result.unbreakable, result.failing, result.cone, universe);
    BigInt total = out.n_break + out.n_safe;
    const BigInt all = BigInt(1) << universe.size();
    if (total > all) {
        if (!out.sampled)
            throw std::logic_error("breaking and safe attacker families overlap");
        total = all;
    }
    out.coverage = scaled_ratio(total, universe.size());
    return out;
}

RequirementMetrics metrics_row(const RequirementResult& result, const CoverageResult& cov, std::size_t steps)
{
    RequirementMetrics row;
    row.requirement = result.requirement;
    row.steps = steps;
    row.ms = std::chrono::duration<double, std::milli>(result.elapsed).count();
    row.n_cone = result.cone.size();
    row.n_min = result.minimal.size();
    row.n_sat_calls = result.sat_calls;
    if (!result.minimal.empty()) {
        double total = 0;
        for (const auto& m : result.minimal)
            total += static_cast<double>(m.size());
        row.avg_min_size = total / static_cast<double>(result.minimal.size());
    }
    row.coverage = cov.coverage;
    row.incomplete = result.incomplete;
    row.sampled = cov.sampled.has_value();
    return row;
}

AverageMetrics average(std::span<const RequirementMetrics> rows, std::size_t steps)
{
    AverageMetrics avg;
    avg.steps = steps;
    avg.rows = rows.size();
    if (rows.empty())
        return avg;
    double sizes = 0;
    std::size_t with_size = 0;
    for (const auto& r : rows) {
        avg.ms += r.ms;
        avg.n_cone += static_cast<double>(r.n_cone);
        avg.n_min += static_cast<double>(r.n_min);
        avg.n_sat_calls += static_cast<double>(r.n_sat_calls);
        avg.coverage += r.coverage;
        if (r.avg_min_size) {
            sizes += *r.avg_min_size;
            ++with_size;
        }
    }
    const auto n = static_cast<double>(rows.size());
    avg.ms /= n;
    avg.n_cone /= n;
    avg.n_min /= n;
    avg.n_sat_calls /= n;
    avg.coverage /= n;
    if (with_size > 0)
        avg.avg_min_size = sizes / static_cast<double>(with_size);
    return avg;
}

}  // namespace aigac
