#include "aigac/classify.hpp"

#include "aigac/error.hpp"
#include "aigac/external_solver.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace aigac {

namespace {

using Clock = std::chrono::steady_clock;

InstanceConfig instance_config(const Options& options, const ComponentSet& universe)
{
    return InstanceConfig{options.steps, options.isolation, universe};
}

}  // namespace

ClusterSession::ClusterSession(const StructureAnalysis& analysis, std::span<const std::size_t> cluster,
                               const Options& options, const ComponentSet& universe)
    : options_(&options), instance_(build_instance(analysis, cluster, instance_config(options, universe)))
{
    if (options.external_solver)
        backend_ = sat::make_external_backend(*options.external_solver);
    else
        backend_ = sat::make_embedded_backend(options.check_witnesses);
    instance_.cnf().load_into(*backend_);
}

CheckResult ClusterSession::check(std::size_t requirement, const ComponentSet& attacker)
{
    auto assumptions = instance_.assumptions(attacker, requirement);
    sat::Limits limits;
    limits.conflicts = options_->conflict_limit;
    CheckResult result;
    result.outcome = backend_->solve(assumptions, limits);
    ++sat_calls_;
    if (result.outcome == sat::Outcome::sat) {
        result.witness = extract_witness(instance_, backend_->model(), attacker, requirement);
        if (options_->check_witnesses) {
            ++witness_checks_;
            auto replayed = replay(instance_.aig(), *result.witness);
            if (!replayed.ok)
                throw std::logic_error("witness replay mismatch for " +
                                       instance_.aig().requirements()[requirement].name + " under " +
                                       attacker.to_string() + " at frame " + std::to_string(replayed.frame) + ": " +
                                       replayed.detail);
        }
    }
    return result;
}

RequirementResult minimal_attackers(ClusterSession& session, const StructureAnalysis& analysis,
                                    std::size_t requirement, const Options& options, const ComponentSet& universe)
{
    const auto start = Clock::now();
    const auto calls_before = session.sat_calls();
    const auto checks_before = session.witness_checks();
    std::optional<Clock::time_point> deadline;
    if (options.budget)
        deadline = start + std::chrono::duration_cast<Clock::duration>(*options.budget);

    RequirementResult res;
    res.requirement = requirement;
    res.cone = intersect(universe, analysis.requirement_coi(requirement));
    res.candidates = options.isolation ? res.cone : universe;

    auto finish = [&]() -> RequirementResult {
        res.sat_calls = session.sat_calls() - calls_before;
        res.witness_checks = session.witness_checks() - checks_before;
        res.elapsed = Clock::now() - start;
        return std::move(res);
    };

    // No attacker in the candidate set breaks r, so none breaks it at all.
    auto exists = session.check(requirement, res.candidates);
    if (exists.outcome == sat::Outcome::indeterminate) {
        res.incomplete = true;
        return finish();
    }
    if (exists.outcome == sat::Outcome::unsat) {
        res.unbreakable = true;
        return finish();
    }

    std::set<ComponentSet, SizeThenLex> frontier{ComponentSet{}};
    std::set<ComponentSet> visited{ComponentSet{}};
    auto has_minimal_subset = [&](const ComponentSet& a) {
        return std::any_of(res.minimal.begin(), res.minimal.end(),
                           [&](const ComponentSet& b) { return b.is_subset_of(a); });
    };

    while (!frontier.empty()) {
        if (deadline && Clock::now() >= *deadline) {
            res.incomplete = true;
            break;
        }
        ComponentSet attacker = *frontier.begin();
        frontier.erase(frontier.begin());
        if (options.monotonicity && has_minimal_subset(attacker)) {
            ++res.skipped;
            continue;
        }
        auto checked = session.check(requirement, attacker);
        if (checked.outcome == sat::Outcome::indeterminate) {
            res.incomplete = true;
            break;
        }
        if (checked.outcome == sat::Outcome::sat) {
            // Only reachable without monotonicity pruning.
            if (has_minimal_subset(attacker)) {
                ++res.non_minimal_successes;
                continue;
            }
            res.minimal.push_back(attacker);
            res.witnesses.push_back(std::move(*checked.witness));
            if (attacker.empty())
                res.broken_by_empty = true;
            continue;
        }
        res.failing.push_back(attacker);
        if (attacker.size() >= options.max_size)
            continue;
        for (auto c : res.candidates) {
            if (attacker.contains(c))
                continue;
            auto grown = attacker.with(c);
            if (visited.insert(grown).second)
                frontier.insert(std::move(grown));
        }
    }
    return finish();
}

bool Classification::incomplete() const
{
    return std::any_of(results.begin(), results.end(), [](const RequirementResult& r) { return r.incomplete; });
}

std::size_t Classification::sat_calls() const
{
    std::size_t n = 0;
    for (const auto& r : results)
        n += r.sat_calls;
    return n;
}

namespace {

std::vector<std::size_t> all_requirements(const Aig& aig)
{
    std::vector<std::size_t> out(aig.requirements().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = i;
    return out;
}

// Runs `work(i)` for i in [0, n) on up to `jobs` threads; rethrows the first
// failure.
template <typename Work>
void run_parallel(std::size_t n, std::size_t jobs, Work work)
{
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i)
            work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : threads)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace

Classification all_minimal_attackers(const StructureAnalysis& analysis, const Options& options)
{
    const Aig& aig = analysis.aig();
    Classification out;
    out.universe = universe_components(aig, options.universe);
    auto reqs = all_requirements(aig);
    out.clusters = analysis.cluster_requirements(reqs, options.cluster_threshold);
    out.results.resize(reqs.size());

    run_parallel(out.clusters.size(), options.jobs, [&](std::size_t i) {
        const auto& cluster = out.clusters[i];
        ClusterSession session(analysis, cluster.requirements, options, out.universe);
        for (auto r : cluster.requirements)
            out.results[r] = minimal_attackers(session, analysis, r, options, out.universe);
    });

    for (const auto& res : out.results) {
        for (const auto& m : res.minimal) {
            out.all_minimal.insert(m);
            out.initial[m].insert(res.requirement);
        }
    }
    return out;
}

ClassificationMap::ClassificationMap(ComponentSet universe, std::size_t num_requirements)
    : universe_(std::move(universe)), num_requirements_(num_requirements),
      explicit_(universe_.size() <= explicit_limit)
{
    if (explicit_)
        table_.assign((std::size_t{1} << universe_.size()) * num_requirements_, false);
    else
        minimal_.resize(num_requirements_);
}

std::uint64_t ClassificationMap::mask_of(const ComponentSet& attacker) const
{
    std::uint64_t mask = 0;
    for (auto id : attacker) {
        auto ids = universe_.ids();
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id)
            throw std::invalid_argument("component " + id.to_string() + " is outside the attacker universe");
        mask |= std::uint64_t{1} << (it - ids.begin());
    }
    return mask;
}

bool ClassificationMap::breaks(const ComponentSet& attacker, std::size_t requirement) const
{
    if (requirement >= num_requirements_)
        throw std::out_of_range("requirement index out of range");
    if (explicit_)
        return table_[mask_of(attacker) * num_requirements_ + requirement];
    for (auto id : attacker)
        if (!universe_.contains(id))
            throw std::invalid_argument("component " + id.to_string() + " is outside the attacker universe");
    const auto& family = minimal_[requirement];
    return std::any_of(family.begin(), family.end(), [&](const ComponentSet& b) { return b.is_subset_of(attacker); });
}

std::set<std::size_t> ClassificationMap::broken(const ComponentSet& attacker) const
{
    std::set<std::size_t> out;
    for (std::size_t r = 0; r < num_requirements_; ++r)
        if (breaks(attacker, r))
            out.insert(r);
    return out;
}

AttackerMap ClassificationMap::entries() const
{
    if (!explicit_)
        throw std::logic_error("entries() needs an explicit classification map");
    AttackerMap out;
    const std::uint64_t n = std::uint64_t{1} << universe_.size();
    for (std::uint64_t mask = 0; mask < n; ++mask) {
        std::vector<ComponentId> ids;
        for (std::size_t b = 0; b < universe_.size(); ++b)
            if (mask >> b & 1u)
                ids.push_back(universe_[b]);
        std::set<std::size_t> broken;
        for (std::size_t r = 0; r < num_requirements_; ++r)
            if (table_[mask * num_requirements_ + r])
                broken.insert(r);
        out.emplace(ComponentSet(std::move(ids)), std::move(broken));
    }
    return out;
}

void ClassificationMap::set(const ComponentSet& attacker, std::size_t requirement)
{
    if (!explicit_)
        throw std::logic_error("set() needs an explicit classification map");
    if (requirement >= num_requirements_)
        throw std::out_of_range("requirement index out of range");
    table_[mask_of(attacker) * num_requirements_ + requirement] = true;
}

bool operator==(const ClassificationMap& a, const ClassificationMap& b)
{
    if (a.universe_ != b.universe_ || a.num_requirements_ != b.num_requirements_ || a.explicit_ != b.explicit_)
        return false;
    if (a.explicit_)
        return a.table_ == b.table_;
    for (std::size_t r = 0; r < a.num_requirements_; ++r) {
        std::set<ComponentSet> x(a.minimal_[r].begin(), a.minimal_[r].end());
        std::set<ComponentSet> y(b.minimal_[r].begin(), b.minimal_[r].end());
        if (x != y)
            return false;
    }
    return true;
}

ClassificationMap propagate(const std::set<ComponentSet>& all_minimal, const AttackerMap& initial,
                            const ComponentSet& universe, std::size_t num_requirements)
{
    ClassificationMap map(universe, num_requirements);
    if (!map.explicit_) {
        for (const auto& [attacker, reqs] : initial)
            for (auto r : reqs)
                map.minimal_.at(r).push_back(attacker);
        return map;
    }
    struct Entry {
        std::uint64_t mask;
        std::vector<std::size_t> reqs;
    };
    std::vector<Entry> minimal;
    for (const auto& m : all_minimal) {
        Entry e{map.mask_of(m), {}};
        if (auto it = initial.find(m); it != initial.end())
            e.reqs.assign(it->second.begin(), it->second.end());
        for (auto r : e.reqs)
            if (r >= num_requirements)
                throw std::out_of_range("requirement index out of range");
        minimal.push_back(std::move(e));
    }
    const std::uint64_t n = std::uint64_t{1} << universe.size();
    for (std::uint64_t mask = 0; mask < n; ++mask)
        for (const auto& e : minimal)
            if ((e.mask & ~mask) == 0)
                for (auto r : e.reqs)
                    map.table_[mask * num_requirements + r] = true;
    return map;
}

NaiveResult naive_classify(const StructureAnalysis& analysis, const Options& options)
{
    const Aig& aig = analysis.aig();
    Options opts = options;
    opts.isolation = false;
    auto universe = universe_components(aig, opts.universe);
    if (universe.size() > ClassificationMap::explicit_limit)
        throw BudgetError("naive classification needs a universe of at most " +
                          std::to_string(ClassificationMap::explicit_limit) + " components, got " +
                          std::to_string(universe.size()));

    NaiveResult out{ClassificationMap(universe, aig.requirements().size()), 0, false};
    auto reqs = all_requirements(aig);
    auto clusters = analysis.cluster_requirements(reqs, opts.cluster_threshold);
    const std::uint64_t n = std::uint64_t{1} << universe.size();
    for (const auto& cluster : clusters) {
        ClusterSession session(analysis, cluster.requirements, opts, universe);
        for (auto r : cluster.requirements) {
            std::optional<Clock::time_point> deadline;
            if (opts.budget)
                deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(*opts.budget);
            for (std::uint64_t mask = 0; mask < n; ++mask) {
                if (deadline && Clock::now() >= *deadline) {
                    out.incomplete = true;
                    break;
                }
                std::vector<ComponentId> ids;
                for (std::size_t b = 0; b < universe.size(); ++b)
                    if (mask >> b & 1u)
                        ids.push_back(universe[b]);
                ComponentSet attacker(std::move(ids));
                auto checked = session.check(r, attacker);
                if (checked.outcome == sat::Outcome::indeterminate) {
                    out.incomplete = true;
                    break;
                }
                if (checked.outcome == sat::Outcome::sat)
                    out.map.set(attacker, r);
            }
        }
        out.sat_calls += session.sat_calls();
    }
    return out;
}

const char* to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::breaks: return "break";
    case Verdict::safe: return "safe";
    case Verdict::unknown: return "unknown";
    }
    return "?";
}

Verdict determine(const RequirementResult& result, const ComponentSet& attacker)
{
    for (const auto& m : result.minimal)
        if (m.is_subset_of(attacker))
            return Verdict::breaks;
    if (result.unbreakable)
        return Verdict::safe;
    auto restricted = intersect(attacker, result.cone);
    for (const auto& f : result.failing)
        if (intersect(f, result.cone) == restricted)
            return Verdict::safe;
    return Verdict::unknown;
}

}  // namespace aigac
