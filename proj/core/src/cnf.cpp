#include "aigac/cnf.hpp"

#include "aigac/error.hpp"

#include <algorithm>
#include <new>
#include <stdexcept>

namespace aigac {

std::optional<std::size_t> Cnf::add_clause(std::vector<sat::Lit> lits)
{
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i) {
        if (lits[i] == ~lits[i - 1]) {
            ++tautologies_;
            return std::nullopt;
        }
    }
    for (auto l : lits)
        if (l.var() >= num_vars_)
            throw std::invalid_argument("clause uses unallocated variable");
    starts_.push_back(lits_.size());
    lits_.insert(lits_.end(), lits.begin(), lits.end());
    return starts_.size() - 1;
}

std::span<const sat::Lit> Cnf::clause(std::size_t index) const
{
    std::size_t begin = starts_.at(index);
    std::size_t end = index + 1 < starts_.size() ? starts_[index + 1] : lits_.size();
    return {lits_.data() + begin, end - begin};
}

void Cnf::load_into(sat::Backend& backend) const
{
    while (backend.num_vars() < num_vars_)
        backend.new_var();
    for (std::size_t i = 0; i < num_clauses(); ++i)
        backend.add_clause(clause(i));
}

sat::Lit UnrolledInstance::lit_at(Literal lit, std::size_t frame) const
{
    if (frame > steps_)
        throw std::out_of_range("frame " + std::to_string(frame) + " beyond bound " + std::to_string(steps_));
    if (lit.is_constant())
        return lit == literal_true ? true_lit() : ~true_lit();
    auto v = frame_var(lit.var(), frame);
    if (!v)
        throw std::out_of_range("variable " + std::to_string(lit.var()) + " is not encoded");
    return sat::Lit::make(*v, lit.negated());
}

std::optional<sat::Var> UnrolledInstance::frame_var(std::uint32_t aig_var, std::size_t frame) const
{
    if (frame > steps_ || aig_var > aig_->max_var())
        return std::nullopt;
    sat::Var v = frame_vars_[static_cast<std::size_t>(aig_var) * (steps_ + 1) + frame];
    if (v < 0)
        return std::nullopt;
    return v;
}

std::optional<sat::Lit> UnrolledInstance::selector(ComponentId id) const
{
    auto it = std::lower_bound(selector_ids_.begin(), selector_ids_.end(), id);
    if (it == selector_ids_.end() || *it != id)
        return std::nullopt;
    return sat::Lit::make(selector_vars_[static_cast<std::size_t>(it - selector_ids_.begin())]);
}

std::optional<sat::Lit> UnrolledInstance::action(ComponentId id, std::size_t frame) const
{
    if (frame > steps_)
        return std::nullopt;
    auto it = std::lower_bound(selector_ids_.begin(), selector_ids_.end(), id);
    if (it == selector_ids_.end() || *it != id)
        return std::nullopt;
    auto slot = static_cast<std::size_t>(it - selector_ids_.begin());
    return sat::Lit::make(action_vars_[slot * (steps_ + 1) + frame]);
}

bool UnrolledInstance::has_requirement(std::size_t requirement) const
{
    return std::find(requirements_.begin(), requirements_.end(), requirement) != requirements_.end();
}

sat::Lit UnrolledInstance::requirement_selector(std::size_t requirement) const
{
    auto it = std::find(requirements_.begin(), requirements_.end(), requirement);
    if (it == requirements_.end())
        throw std::out_of_range("requirement " + std::to_string(requirement) + " is not part of this instance");
    return sat::Lit::make(requirement_selectors_[static_cast<std::size_t>(it - requirements_.begin())]);
}

std::size_t UnrolledInstance::goal_clause(std::size_t requirement) const
{
    auto it = std::find(requirements_.begin(), requirements_.end(), requirement);
    if (it == requirements_.end())
        throw std::out_of_range("requirement " + std::to_string(requirement) + " is not part of this instance");
    return goal_clauses_[static_cast<std::size_t>(it - requirements_.begin())];
}

std::vector<sat::Lit> UnrolledInstance::assumptions(const ComponentSet& attacker,
                                                    std::optional<std::size_t> requirement) const
{
    for (auto id : attacker)
        if (!universe_.contains(id))
            throw std::invalid_argument("component " + id.to_string() + " is outside the attacker universe");
    std::vector<sat::Lit> out;
    out.reserve(selector_ids_.size() + requirements_.size());
    for (std::size_t i = 0; i < selector_ids_.size(); ++i)
        out.push_back(sat::Lit::make(selector_vars_[i], !attacker.contains(selector_ids_[i])));
    if (requirement && !has_requirement(*requirement))
        throw std::out_of_range("requirement " + std::to_string(*requirement) + " is not part of this instance");
    for (std::size_t i = 0; i < requirements_.size(); ++i)
        out.push_back(sat::Lit::make(requirement_selectors_[i], requirements_[i] != requirement));
    return out;
}

std::string UnrolledInstance::to_dimacs() const
{
    std::string out;
    for (std::size_t i = 0; i < selector_ids_.size(); ++i)
        out += "c selector " + selector_ids_[i].to_string() + " " + std::to_string(selector_vars_[i] + 1) + "\n";
    for (std::size_t i = 0; i < selector_ids_.size(); ++i)
        for (std::size_t k = 0; k <= steps_; ++k)
            out += "c action " + selector_ids_[i].to_string() + " " + std::to_string(k) + " " +
                   std::to_string(action_vars_[i * (steps_ + 1) + k] + 1) + "\n";
    for (std::uint32_t v = 1; v <= aig_->max_var(); ++v)
        for (std::size_t k = 0; k <= steps_; ++k)
            if (auto fv = frame_var(v, k))
                out += "c frame " + std::to_string(v) + " " + std::to_string(k) + " " + std::to_string(*fv + 1) + "\n";
    for (std::size_t i = 0; i < requirements_.size(); ++i)
        out += "c requirement " + aig_->requirements()[requirements_[i]].name + " " +
               std::to_string(requirement_selectors_[i] + 1) + "\n";
    out += "p cnf " + std::to_string(cnf_.num_vars()) + " " + std::to_string(cnf_.num_clauses()) + "\n";
    for (std::size_t i = 0; i < cnf_.num_clauses(); ++i) {
        for (auto l : cnf_.clause(i)) {
            out += std::to_string(l.to_dimacs());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

void UnrolledInstance::guarded(std::optional<sat::Lit> guard, std::vector<sat::Lit> clause)
{
    if (guard)
        clause.push_back(*guard);
    cnf_.add_clause(std::move(clause));
}

// Without a selector: v(k) ⇔ src. With one: (v↓ ∨ (v(k) ⇔ src)) ∧ (¬v↓ ∨ (v(k) ⇔ A_v(k))),
// where src is the init constant at k = 0 and next(k-1) otherwise.
void UnrolledInstance::encode_latch(std::size_t latch, std::size_t frame)
{
    const auto& l = aig_->latches()[latch];
    sat::Lit v = lit_at(Literal::of_var(l.var), frame);
    sat::Lit src = frame == 0 ? (l.init ? true_lit() : ~true_lit()) : lit_at(l.next, frame - 1);
    auto sel = selector(latch_id(static_cast<std::uint32_t>(latch)));
    guarded(sel, {~v, src});
    guarded(sel, {v, ~src});
    if (sel) {
        sat::Lit a = *action(latch_id(static_cast<std::uint32_t>(latch)), frame);
        guarded(~*sel, {~v, a});
        guarded(~*sel, {v, ~a});
    }
}

void UnrolledInstance::encode_gate(std::size_t gate, std::size_t frame)
{
    const auto& g = aig_->gates()[gate];
    sat::Lit out = lit_at(Literal::of_var(g.var), frame);
    sat::Lit a = lit_at(g.rhs0, frame);
    sat::Lit b = lit_at(g.rhs1, frame);
    auto sel = selector(gate_id(static_cast<std::uint32_t>(gate)));
    guarded(sel, {~out, a});
    guarded(sel, {~out, b});
    guarded(sel, {out, ~a, ~b});
    if (sel) {
        sat::Lit act = *action(gate_id(static_cast<std::uint32_t>(gate)), frame);
        guarded(~*sel, {~out, act});
        guarded(~*sel, {out, ~act});
    }
}

// (¬r↓ ∨ ¬e(0) ∨ … ∨ ¬e(t)); the constant-false literal ¬TRUE is left out.
void UnrolledInstance::add_goal_clause(std::size_t requirement)
{
    const auto& req = aig_->requirements()[requirement];
    std::vector<sat::Lit> clause{~requirement_selector(requirement)};
    for (std::size_t k = 0; k <= steps_; ++k) {
        sat::Lit bad = ~lit_at(req.good, k);
        if (bad != ~true_lit())
            clause.push_back(bad);
    }
    auto index = cnf_.add_clause(std::move(clause));
    goal_clauses_.push_back(index.value_or(cnf_.num_clauses()));
}

UnrolledInstance build_instance(const StructureAnalysis& analysis, std::span<const std::size_t> cluster,
                                const InstanceConfig& config)
{
    const Aig& aig = analysis.aig();
    for (auto r : cluster)
        if (r >= aig.requirements().size())
            throw std::out_of_range("requirement index " + std::to_string(r) + " out of range");
    for (auto id : config.universe)
        if (id.kind == ComponentKind::input || !aig.contains(id))
            throw std::invalid_argument("invalid universe component " + id.to_string());

    try {
        UnrolledInstance inst;
        inst.aig_ = &aig;
        inst.steps_ = config.steps;
        inst.universe_ = config.universe;
        inst.requirements_.assign(cluster.begin(), cluster.end());
        const std::size_t frames = config.steps + 1;

        ComponentSet cone;
        if (config.isolation) {
            for (auto r : cluster)
                cone = unite(cone, analysis.requirement_coi(r));
        } else {
            std::vector<ComponentId> all;
            for (std::uint32_t i = 0; i < aig.num_inputs(); ++i)
                all.push_back(input_id(i));
            for (std::uint32_t i = 0; i < aig.num_latches(); ++i)
                all.push_back(latch_id(i));
            for (std::uint32_t i = 0; i < aig.num_gates(); ++i)
                all.push_back(gate_id(i));
            cone = ComponentSet(std::move(all));
        }
        std::vector<ComponentId> encoded;
        for (auto id : cone)
            if (id.kind != ComponentKind::input)
                encoded.push_back(id);
        inst.encoded_ = ComponentSet(std::move(encoded));
        inst.selectable_ = intersect(inst.encoded_, config.universe);

        Cnf& cnf = inst.cnf_;
        sat::Var truth = cnf.new_var();
        cnf.add_clause({sat::Lit::make(truth)});

        for (auto id : inst.selectable_) {
            inst.selector_ids_.push_back(id);
            inst.selector_vars_.push_back(cnf.new_var());
        }
        for (std::size_t i = 0; i < cluster.size(); ++i)
            inst.requirement_selectors_.push_back(cnf.new_var());

        inst.frame_vars_.assign(static_cast<std::size_t>(aig.max_var() + 1) * frames, -1);
        inst.action_vars_.assign(inst.selector_ids_.size() * frames, -1);
        for (std::size_t k = 0; k < frames; ++k) {
            for (auto id : cone)
                inst.frame_vars_[static_cast<std::size_t>(aig.var(id)) * frames + k] = cnf.new_var();
            for (std::size_t s = 0; s < inst.selector_ids_.size(); ++s)
                inst.action_vars_[s * frames + k] = cnf.new_var();
        }

        for (std::size_t k = 0; k < frames; ++k) {
            for (auto id : inst.encoded_) {
                if (id.kind == ComponentKind::latch)
                    inst.encode_latch(id.index, k);
                else
                    inst.encode_gate(id.index, k);
            }
        }
        for (auto r : cluster)
            inst.add_goal_clause(r);
        return inst;
    } catch (const std::bad_alloc&) {
        throw BudgetError("out of memory while unrolling " + std::to_string(config.steps) + " steps");
    }
}

}  // namespace aigac
