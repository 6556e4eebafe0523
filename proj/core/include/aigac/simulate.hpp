#pragma once

#include "aigac/aig.hpp"

#include <map>
#include <vector>

namespace aigac {

/// One bit per latch, in latch order.
using State = std::vector<bool>;
/// One bit per input, in input order.
using InputVector = std::vector<bool>;
/// Values chosen by an attacker for the components it controls.
using Attack = std::map<ComponentId, bool>;
/// One bit per AIG variable; entry 0 is the constant FALSE.
using Valuation = std::vector<bool>;

struct StepResult {
    State next_state;
    std::vector<bool> gate_values;
    Valuation valuation;
};

bool eval_literal(Literal lit, const Valuation& valuation);

/// Initial state: latch init bits, except attacked latches which take the
/// attack's value.
State initial_state(const Aig& aig, const Attack& attack = {});

/// Evaluates one frame. Attacked gates take their attack value in this
/// frame; attacked latches take their attack value in the *next* state.
/// Throws std::invalid_argument when the attack names an input.
StepResult simulate_step(const Aig& aig, const State& state, const InputVector& input, const Attack& attack = {});

}  // namespace aigac
