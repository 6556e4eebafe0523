#include "aigac/sat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace aigac::sat {

Lit Lit::from_dimacs(int value)
{
    if (value == 0)
        throw std::invalid_argument("0 is not a DIMACS literal");
    return make(std::abs(value) - 1, value < 0);
}

const char* to_string(Outcome outcome)
{
    switch (outcome) {
    case Outcome::sat: return "SAT";
    case Outcome::unsat: return "UNSAT";
    case Outcome::indeterminate: return "INDETERMINATE";
    }
    return "?";
}

namespace {

using CRef = std::uint32_t;
constexpr CRef no_reason = std::numeric_limits<CRef>::max();

// Per-variable assignment: 0 = false, 1 = true, 2 = unassigned.
constexpr std::uint8_t val_false = 0;
constexpr std::uint8_t val_true = 1;
constexpr std::uint8_t val_undef = 2;

struct Clause {
    std::vector<Lit> lits;
    float activity = 0;
    bool learnt = false;
    bool deleted = false;
};

struct Watcher {
    CRef cref;
    Lit blocker;
};

/// Max-heap of variables keyed by activity.
class VarHeap {
public:
    explicit VarHeap(const std::vector<double>& activity) : activity_(activity) {}

    bool contains(Var v) const { return v < static_cast<Var>(pos_.size()) && pos_[v] >= 0; }
    bool empty() const { return heap_.empty(); }

    void grow(Var v)
    {
        if (v >= static_cast<Var>(pos_.size()))
            pos_.resize(v + 1, -1);
    }

    void insert(Var v)
    {
        grow(v);
        if (contains(v))
            return;
        pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(pos_[v]);
    }

    void increased(Var v)
    {
        if (contains(v))
            up(pos_[v]);
    }

    Var pop()
    {
        Var top = heap_.front();
        heap_.front() = heap_.back();
        pos_[heap_.front()] = 0;
        heap_.pop_back();
        pos_[top] = -1;
        if (!heap_.empty())
            down(0);
        return top;
    }

private:
    bool better(Var a, Var b) const { return activity_[a] > activity_[b]; }

    void up(int i)
    {
        Var v = heap_[i];
        while (i > 0) {
            int parent = (i - 1) / 2;
            if (!better(v, heap_[parent]))
                break;
            heap_[i] = heap_[parent];
            pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        pos_[v] = i;
    }

    void down(int i)
    {
        Var v = heap_[i];
        const int n = static_cast<int>(heap_.size());
        while (true) {
            int child = 2 * i + 1;
            if (child >= n)
                break;
            if (child + 1 < n && better(heap_[child + 1], heap_[child]))
                ++child;
            if (!better(heap_[child], v))
                break;
            heap_[i] = heap_[child];
            pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        pos_[v] = i;
    }

    const std::vector<double>& activity_;
    std::vector<Var> heap_;
    std::vector<int> pos_;
};

}  // namespace

struct Solver::Impl {
    // Clause database.
    std::vector<Clause> clauses;
    std::vector<CRef> free_slots;
    std::vector<CRef> learnts;
    std::size_t num_problem = 0;
    std::vector<std::vector<Lit>> originals;  // only kept when check_models
    bool check_models = false;

    // Assignment.
    std::vector<std::uint8_t> assigns;
    std::vector<int> level;
    std::vector<CRef> reason;
    std::vector<bool> saved_negated;
    std::vector<Lit> trail;
    std::vector<std::size_t> trail_lim;
    std::size_t qhead = 0;
    std::vector<std::vector<Watcher>> watches;  // indexed by Lit::index(); clauses watching ~lit

    // Heuristics.
    std::vector<double> activity;
    VarHeap order{activity};
    double var_inc = 1.0;
    double var_decay = 0.95;
    double cla_inc = 1.0;
    double cla_decay = 0.999;
    double max_learnts = 0;

    // Scratch.
    std::vector<std::uint8_t> seen;
    std::vector<Lit> analyze_clear;

    bool ok = true;
    Model model;
    std::vector<Lit> core;
    std::vector<Lit> assumptions;
    Stats stats;

    Var num_vars() const { return static_cast<Var>(assigns.size()); }

    std::uint8_t value(Lit p) const
    {
        auto v = assigns[p.var()];
        return v == val_undef ? val_undef : static_cast<std::uint8_t>(v ^ static_cast<std::uint8_t>(p.negated()));
    }
    std::uint8_t value(Var v) const { return assigns[v]; }

    int decision_level() const { return static_cast<int>(trail_lim.size()); }

    Var new_var()
    {
        Var v = num_vars();
        assigns.push_back(val_undef);
        level.push_back(0);
        reason.push_back(no_reason);
        saved_negated.push_back(true);
        activity.push_back(0.0);
        seen.push_back(0);
        watches.emplace_back();
        watches.emplace_back();
        order.insert(v);
        return v;
    }

    void enqueue(Lit p, CRef from)
    {
        assigns[p.var()] = p.negated() ? val_false : val_true;
        level[p.var()] = decision_level();
        reason[p.var()] = from;
        trail.push_back(p);
    }

    void new_decision_level() { trail_lim.push_back(trail.size()); }

    void cancel_until(int target)
    {
        if (decision_level() <= target)
            return;
        for (std::size_t i = trail.size(); i-- > trail_lim[target];) {
            Var v = trail[i].var();
            saved_negated[v] = trail[i].negated();
            assigns[v] = val_undef;
            reason[v] = no_reason;
            order.insert(v);
        }
        trail.resize(trail_lim[target]);
        trail_lim.resize(target);
        qhead = trail.size();
    }

    CRef alloc(std::vector<Lit> lits, bool learnt)
    {
        CRef cr;
        if (!free_slots.empty()) {
            cr = free_slots.back();
            free_slots.pop_back();
            clauses[cr] = Clause{std::move(lits), 0.0f, learnt, false};
        } else {
            cr = static_cast<CRef>(clauses.size());
            clauses.push_back(Clause{std::move(lits), 0.0f, learnt, false});
        }
        return cr;
    }

    void attach(CRef cr)
    {
        const auto& c = clauses[cr].lits;
        watches[(~c[0]).index()].push_back({cr, c[1]});
        watches[(~c[1]).index()].push_back({cr, c[0]});
    }

    bool locked(CRef cr) const
    {
        const auto& c = clauses[cr].lits;
        return reason[c[0].var()] == cr && value(c[0]) == val_true;
    }

    CRef propagate()
    {
        CRef conflict = no_reason;
        while (qhead < trail.size()) {
            Lit p = trail[qhead++];
            auto& ws = watches[p.index()];
            const Lit false_lit = ~p;
            ++stats.propagations;
            std::size_t i = 0;
            std::size_t j = 0;
            const std::size_t n = ws.size();
            while (i < n) {
                if (value(ws[i].blocker) == val_true) {
                    ws[j++] = ws[i++];
                    continue;
                }
                CRef cr = ws[i].cref;
                auto& c = clauses[cr].lits;
                if (c[0] == false_lit)
                    std::swap(c[0], c[1]);
                ++i;
                Lit first = c[0];
                Watcher w{cr, first};
                if (value(first) == val_true) {
                    ws[j++] = w;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (value(c[k]) != val_false) {
                        std::swap(c[1], c[k]);
                        watches[(~c[1]).index()].push_back(w);
                        moved = true;
                        break;
                    }
                }
                if (moved)
                    continue;
                ws[j++] = w;
                if (value(first) == val_false) {
                    conflict = cr;
                    qhead = trail.size();
                    while (i < n)
                        ws[j++] = ws[i++];
                } else {
                    enqueue(first, cr);
                }
            }
            ws.resize(j);
            if (conflict != no_reason)
                break;
        }
        return conflict;
    }

    void bump_var(Var v)
    {
        if ((activity[v] += var_inc) > 1e100) {
            for (auto& a : activity)
                a *= 1e-100;
            var_inc *= 1e-100;
        }
        order.increased(v);
    }

    void bump_clause(Clause& c)
    {
        if ((c.activity += static_cast<float>(cla_inc)) > 1e20f) {
            for (auto cr : learnts)
                clauses[cr].activity *= 1e-20f;
            cla_inc *= 1e-20;
        }
    }

    bool redundant(Lit p) const
    {
        CRef r = reason[p.var()];
        if (r == no_reason)
            return false;
        const auto& c = clauses[r].lits;
        for (std::size_t k = 1; k < c.size(); ++k)
            if (!seen[c[k].var()] && level[c[k].var()] > 0)
                return false;
        return true;
    }

    // First-UIP conflict analysis. Returns the backtrack level.
    int analyze(CRef conflict, std::vector<Lit>& out)
    {
        out.clear();
        out.push_back(Lit{});
        int path = 0;
        bool have_p = false;
        Lit p;
        std::size_t index = trail.size();
        CRef cr = conflict;
        do {
            auto& c = clauses[cr];
            if (c.learnt)
                bump_clause(c);
            for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
                Lit q = c.lits[k];
                Var v = q.var();
                if (!seen[v] && level[v] > 0) {
                    bump_var(v);
                    seen[v] = 1;
                    if (level[v] >= decision_level())
                        ++path;
                    else
                        out.push_back(q);
                }
            }
            while (!seen[trail[--index].var()]) {
            }
            p = trail[index];
            have_p = true;
            cr = reason[p.var()];
            seen[p.var()] = 0;
            --path;
        } while (path > 0);
        out[0] = ~p;

        analyze_clear.assign(out.begin(), out.end());
        std::size_t keep = 1;
        for (std::size_t k = 1; k < out.size(); ++k)
            if (!redundant(out[k]))
                out[keep++] = out[k];
        out.resize(keep);
        for (auto q : analyze_clear)
            seen[q.var()] = 0;

        if (out.size() == 1)
            return 0;
        std::size_t max_k = 1;
        for (std::size_t k = 2; k < out.size(); ++k)
            if (level[out[k].var()] > level[out[max_k].var()])
                max_k = k;
        std::swap(out[1], out[max_k]);
        return level[out[1].var()];
    }

    // `falsified` is an assumption currently assigned false.
    void analyze_final(Lit falsified)
    {
        core.clear();
        core.push_back(falsified);
        if (decision_level() == 0 || level[falsified.var()] == 0)
            return;
        seen[falsified.var()] = 1;
        for (std::size_t i = trail.size(); i-- > trail_lim[0];) {
            Var x = trail[i].var();
            if (!seen[x])
                continue;
            if (reason[x] == no_reason) {
                core.push_back(trail[i]);
            } else {
                const auto& c = clauses[reason[x]].lits;
                for (std::size_t k = 1; k < c.size(); ++k)
                    if (level[c[k].var()] > 0)
                        seen[c[k].var()] = 1;
            }
            seen[x] = 0;
        }
        seen[falsified.var()] = 0;
    }

    std::optional<Lit> pick_branch()
    {
        while (!order.empty()) {
            Var v = order.pop();
            if (value(v) == val_undef)
                return Lit::make(v, saved_negated[v]);
        }
        return std::nullopt;
    }

    void reduce_db()
    {
        std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
            const auto& ca = clauses[a];
            const auto& cb = clauses[b];
            if ((ca.lits.size() > 2) != (cb.lits.size() > 2))
                return ca.lits.size() > 2;
            return ca.activity < cb.activity;
        });
        const double extra_lim = cla_inc / static_cast<double>(std::max<std::size_t>(learnts.size(), 1));
        std::size_t keep = 0;
        bool removed = false;
        for (std::size_t i = 0; i < learnts.size(); ++i) {
            auto cr = learnts[i];
            auto& c = clauses[cr];
            if (c.lits.size() > 2 && !locked(cr) && (i < learnts.size() / 2 || c.activity < extra_lim)) {
                c.deleted = true;
                removed = true;
            } else {
                learnts[keep++] = cr;
            }
        }
        learnts.resize(keep);
        if (!removed)
            return;
        for (auto& ws : watches)
            ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return clauses[w.cref].deleted; }),
                     ws.end());
        for (CRef cr = 0; cr < clauses.size(); ++cr) {
            auto& c = clauses[cr];
            if (c.deleted && !c.lits.empty()) {
                c.lits.clear();
                c.lits.shrink_to_fit();
                free_slots.push_back(cr);
            }
        }
    }

    bool out_of_budget(const Limits& limits, std::uint64_t conflicts_at_start) const
    {
        if (limits.conflicts && stats.conflicts - conflicts_at_start >= *limits.conflicts)
            return true;
        if (limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline)
            return true;
        return false;
    }

    // Returns sat/unsat, or indeterminate for a restart or an exhausted budget.
    Outcome search(std::uint64_t conflict_cap, const Limits& limits, std::uint64_t conflicts_at_start,
                   bool& budget_hit)
    {
        std::uint64_t conflicts_here = 0;
        std::vector<Lit> learnt;
        while (true) {
            CRef conflict = propagate();
            if (conflict != no_reason) {
                ++stats.conflicts;
                ++conflicts_here;
                if (decision_level() == 0) {
                    ok = false;
                    return Outcome::unsat;
                }
                int back = analyze(conflict, learnt);
                cancel_until(back);
                stats.learnt_literals += learnt.size();
                if (learnt.size() == 1) {
                    enqueue(learnt[0], no_reason);
                } else {
                    CRef cr = alloc(learnt, true);
                    learnts.push_back(cr);
                    attach(cr);
                    bump_clause(clauses[cr]);
                    enqueue(learnt[0], cr);
                }
                var_inc /= var_decay;
                cla_inc /= cla_decay;
                if ((stats.conflicts & 63u) == 0 || limits.conflicts) {
                    if (out_of_budget(limits, conflicts_at_start)) {
                        budget_hit = true;
                        return Outcome::indeterminate;
                    }
                }
                continue;
            }

            if (conflicts_here >= conflict_cap)
                return Outcome::indeterminate;
            if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= max_learnts)
                reduce_db();

            Lit next = Lit::make(-1);
            bool have_next = false;
            while (decision_level() < static_cast<int>(assumptions.size())) {
                Lit a = assumptions[decision_level()];
                auto v = value(a);
                if (v == val_true) {
                    new_decision_level();
                } else if (v == val_false) {
                    analyze_final(a);
                    return Outcome::unsat;
                } else {
                    next = a;
                    have_next = true;
                    break;
                }
            }
            if (!have_next) {
                ++stats.decisions;
                auto branch = pick_branch();
                if (!branch)
                    return Outcome::sat;
                next = *branch;
            }
            new_decision_level();
            enqueue(next, no_reason);
        }
    }

    void verify_model() const
    {
        for (const auto& c : originals) {
            bool satisfied = std::any_of(c.begin(), c.end(), [&](Lit l) { return model[l.var()] != l.negated(); });
            if (!satisfied)
                throw std::logic_error("SAT model violates an input clause");
        }
    }
};

Solver::Solver() : impl_(std::make_unique<Impl>()) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

Var Solver::new_var() { return impl_->new_var(); }

void Solver::reserve_vars(Var count)
{
    while (impl_->num_vars() < count)
        impl_->new_var();
}

Var Solver::num_vars() const { return impl_->num_vars(); }

bool Solver::add_clause(std::span<const Lit> input)
{
    auto& s = *impl_;
    if (s.check_models)
        s.originals.emplace_back(input.begin(), input.end());
    if (!s.ok)
        return false;
    std::vector<Lit> lits(input.begin(), input.end());
    for (auto l : lits)
        if (l.var() < 0 || l.var() >= s.num_vars())
            throw std::invalid_argument("clause literal refers to unallocated variable " + std::to_string(l.var()));
    std::sort(lits.begin(), lits.end());
    std::size_t keep = 0;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i > 0 && lits[i] == lits[i - 1])
            continue;
        if (i > 0 && lits[i] == ~lits[i - 1])
            return true;  // tautology
        auto v = s.value(lits[i]);
        if (v == val_true)
            return true;
        if (v == val_false)
            continue;
        lits[keep++] = lits[i];
    }
    lits.resize(keep);
    if (lits.empty()) {
        s.ok = false;
        return false;
    }
    if (lits.size() == 1) {
        s.enqueue(lits[0], no_reason);
        if (s.propagate() != no_reason)
            s.ok = false;
        return s.ok;
    }
    CRef cr = s.alloc(std::move(lits), false);
    s.attach(cr);
    ++s.num_problem;
    return true;
}

Outcome Solver::solve(std::span<const Lit> assumptions, const Limits& limits)
{
    auto& s = *impl_;
    ++s.stats.solves;
    s.model.clear();
    s.core.clear();
    for (auto a : assumptions)
        if (a.var() < 0 || a.var() >= s.num_vars())
            throw std::invalid_argument("assumption refers to unallocated variable " + std::to_string(a.var()));
    if (!s.ok)
        return Outcome::unsat;

    s.assumptions.assign(assumptions.begin(), assumptions.end());
    s.max_learnts = std::max(static_cast<double>(s.num_problem) / 3.0, 2000.0);
    const auto conflicts_at_start = s.stats.conflicts;
    double restart_cap = 100;
    Outcome result = Outcome::indeterminate;
    bool budget_hit = false;
    while (result == Outcome::indeterminate) {
        result = s.search(static_cast<std::uint64_t>(restart_cap), limits, conflicts_at_start, budget_hit);
        if (budget_hit)
            break;
        if (result == Outcome::indeterminate) {
            ++s.stats.restarts;
            restart_cap *= 1.5;
            s.max_learnts *= 1.1;
            s.cancel_until(0);
            if (s.out_of_budget(limits, conflicts_at_start))
                break;
        }
    }

    if (result == Outcome::sat) {
        s.model.resize(s.num_vars());
        for (Var v = 0; v < s.num_vars(); ++v)
            s.model[v] = s.assigns[v] == val_true;
        if (s.check_models)
            s.verify_model();
    }
    s.cancel_until(0);
    s.assumptions.clear();
    return result;
}

const Model& Solver::model() const { return impl_->model; }

bool Solver::model_value(Lit lit) const { return impl_->model.at(lit.var()) != lit.negated(); }

const std::vector<Lit>& Solver::core() const { return impl_->core; }

bool Solver::okay() const { return impl_->ok; }

const Stats& Solver::stats() const { return impl_->stats; }

std::size_t Solver::num_clauses() const { return impl_->num_problem; }

std::size_t Solver::num_learnts() const { return impl_->learnts.size(); }

void Solver::set_check_models(bool enabled) { impl_->check_models = enabled; }

namespace {

class EmbeddedBackend final : public Backend {
public:
    explicit EmbeddedBackend(bool check_models) { solver_.set_check_models(check_models); }

    Var new_var() override { return solver_.new_var(); }
    Var num_vars() const override { return solver_.num_vars(); }
    void add_clause(std::span<const Lit> lits) override { solver_.add_clause(lits); }
    Outcome solve(std::span<const Lit> assumptions, const Limits& limits) override
    {
        return solver_.solve(assumptions, limits);
    }
    const Model& model() const override { return solver_.model(); }

private:
    Solver solver_;
};

}  // namespace

std::unique_ptr<Backend> make_embedded_backend(bool check_models)
{
    return std::make_unique<EmbeddedBackend>(check_models);
}

}  // namespace aigac::sat
