#include "aigac/witness.hpp"

#include "json.hpp"

#include <stdexcept>

namespace aigac {

namespace {

bool model_value(const sat::Model& model, sat::Lit lit)
{
    auto v = static_cast<std::size_t>(lit.var());
    bool value = v < model.size() && model[v];
    return value != lit.negated();
}

}  // namespace

Witness extract_witness(const UnrolledInstance& inst, const sat::Model& model, const ComponentSet& attacker,
                        std::size_t requirement)
{
    const Aig& aig = inst.aig();
    const Literal good = aig.requirements()[requirement].good;
    std::optional<std::size_t> step;
    for (std::size_t k = 0; k <= inst.steps(); ++k) {
        if (!model_value(model, inst.lit_at(good, k))) {
            step = k;
            break;
        }
    }
    if (!step)
        throw std::logic_error("model does not falsify requirement " + aig.requirements()[requirement].name +
                               " within " + std::to_string(inst.steps()) + " steps");

    Witness w;
    w.requirement = requirement;
    w.attacker = attacker;
    w.step = *step;
    for (std::size_t k = 0; k <= *step; ++k) {
        InputVector in(aig.num_inputs(), false);
        for (std::size_t i = 0; i < aig.num_inputs(); ++i)
            if (auto v = inst.frame_var(aig.inputs()[i], k))
                in[i] = model_value(model, sat::Lit::make(*v));
        w.inputs.push_back(std::move(in));
        Attack attack;
        for (auto id : attacker) {
            auto a = inst.action(id, k);
            attack[id] = a ? model_value(model, *a) : false;
        }
        w.attacks.push_back(std::move(attack));
    }
    return w;
}

ReplayResult replay(const Aig& aig, const Witness& w)
{
    if (w.requirement >= aig.requirements().size())
        return {false, 0, "unknown requirement"};
    if (w.inputs.size() != w.step + 1 || w.attacks.size() != w.step + 1)
        return {false, 0, "witness has " + std::to_string(w.inputs.size()) + " input frames for step " +
                              std::to_string(w.step)};
    for (std::size_t k = 0; k <= w.step; ++k) {
        if (w.inputs[k].size() != aig.num_inputs())
            return {false, k, "input vector width"};
        ComponentSet domain;
        for (const auto& [id, _] : w.attacks[k])
            domain.insert(id);
        if (domain != w.attacker)
            return {false, k, "attack domain " + domain.to_string() + " differs from attacker " +
                                  w.attacker.to_string()};
    }

    auto latch_part = [](const Attack& a) {
        Attack out;
        for (const auto& [id, value] : a)
            if (id.kind == ComponentKind::latch)
                out.emplace(id, value);
        return out;
    };
    auto gate_part = [](const Attack& a) {
        Attack out;
        for (const auto& [id, value] : a)
            if (id.kind == ComponentKind::gate)
                out.emplace(id, value);
        return out;
    };

    const Literal good = aig.requirements()[w.requirement].good;
    State state = initial_state(aig, latch_part(w.attacks[0]));
    for (std::size_t k = 0; k <= w.step; ++k) {
        // simulate_step applies latch attacks to the next state, so frame k's
        // step carries the gate attacks of k and the latch attacks of k + 1.
        Attack attack = gate_part(w.attacks[k]);
        if (k < w.step)
            attack.merge(latch_part(w.attacks[k + 1]));
        StepResult r;
        try {
            r = simulate_step(aig, state, w.inputs[k], attack);
        } catch (const std::exception& e) {
            return {false, k, e.what()};
        }
        bool holds = eval_literal(good, r.valuation);
        if (k < w.step && !holds) {
            // Still a valid violation, just earlier than recorded.
            return {false, k, "requirement already false at frame " + std::to_string(k)};
        }
        if (k == w.step)
            return holds ? ReplayResult{false, k, "requirement literal holds at frame " + std::to_string(k)}
                         : ReplayResult{true, k, {}};
        state = std::move(r.next_state);
    }
    return {false, w.step, "unreachable"};
}

std::string witness_to_json(const Aig& aig, const Witness& w, int indent)
{
    nlohmann::ordered_json j;
    j["requirement"] = aig.requirements()[w.requirement].name;
    auto attacker = nlohmann::ordered_json::array();
    for (auto id : w.attacker)
        attacker.push_back(id.to_string());
    j["attacker"] = attacker;
    j["step"] = w.step;
    auto inputs = nlohmann::ordered_json::array();
    for (const auto& in : w.inputs) {
        std::string bits;
        for (bool b : in)
            bits += b ? '1' : '0';
        inputs.push_back(bits);
    }
    j["inputs"] = inputs;
    auto attacks = nlohmann::ordered_json::array();
    for (const auto& a : w.attacks) {
        nlohmann::ordered_json frame = nlohmann::ordered_json::object();
        for (const auto& [id, value] : a)
            frame[id.to_string()] = value ? 1 : 0;
        attacks.push_back(frame);
    }
    j["attacks"] = attacks;
    return j.dump(indent);
}

}  // namespace aigac
