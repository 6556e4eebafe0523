#include "aigac/simulate.hpp"

#include <stdexcept>

namespace aigac {

bool eval_literal(Literal lit, const Valuation& valuation)
{
    if (lit.is_constant())
        return lit == literal_true;
    return valuation.at(lit.var()) != lit.negated();
}

namespace {

void reject_inputs(const Attack& attack)
{
    for (const auto& [id, value] : attack)
        if (id.kind == ComponentKind::input)
            throw std::invalid_argument("inputs cannot be attacked (" + id.to_string() + ")");
}

}  // namespace

State initial_state(const Aig& aig, const Attack& attack)
{
    reject_inputs(attack);
    State state(aig.num_latches());
    for (std::uint32_t i = 0; i < state.size(); ++i) {
        auto it = attack.find(latch_id(i));
        state[i] = it != attack.end() ? it->second : aig.latches()[i].init;
    }
    return state;
}

StepResult simulate_step(const Aig& aig, const State& state, const InputVector& input, const Attack& attack)
{
    reject_inputs(attack);
    if (state.size() != aig.num_latches() || input.size() != aig.num_inputs())
        throw std::invalid_argument("state or input vector has the wrong width");

    StepResult result;
    result.valuation.assign(std::size_t{aig.max_var()} + 1, false);
    auto& val = result.valuation;
    for (std::uint32_t i = 0; i < input.size(); ++i)
        val[aig.inputs()[i]] = input[i];
    for (std::uint32_t i = 0; i < state.size(); ++i)
        val[aig.latches()[i].var] = state[i];

    result.gate_values.resize(aig.num_gates());
    for (std::uint32_t i = 0; i < aig.num_gates(); ++i) {
        const auto& g = aig.gates()[i];
        auto it = attack.find(gate_id(i));
        bool value = it != attack.end() ? it->second : (eval_literal(g.rhs0, val) && eval_literal(g.rhs1, val));
        val[g.var] = value;
        result.gate_values[i] = value;
    }

    result.next_state.resize(aig.num_latches());
    for (std::uint32_t i = 0; i < aig.num_latches(); ++i) {
        auto it = attack.find(latch_id(i));
        result.next_state[i] = it != attack.end() ? it->second : eval_literal(aig.latches()[i].next, val);
    }
    return result;
}

}  // namespace aigac
