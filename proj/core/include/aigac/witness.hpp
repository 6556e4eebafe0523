#pragma once

#include "aigac/cnf.hpp"
#include "aigac/simulate.hpp"
#include "aigac/structure.hpp"

#include <string>
#include <vector>

namespace aigac {

/// Input sequence plus attack strategy that drives a requirement's literal to
/// false at frame `step`.
struct Witness {
    std::size_t requirement = 0;
    ComponentSet attacker;
    std::size_t step = 0;
    std::vector<InputVector> inputs;  // frames 0..step
    std::vector<Attack> attacks;      // frames 0..step, each over exactly `attacker`

    friend bool operator==(const Witness&, const Witness&) = default;
};

/// Reads inputs and attacker actions from a SAT model of `inst` solved under
/// inst.assumptions(attacker, requirement). Values the instance does not
/// constrain read as 0. Throws std::logic_error when the model never
/// falsifies the requirement.
Witness extract_witness(const UnrolledInstance& inst, const sat::Model& model, const ComponentSet& attacker,
                        std::size_t requirement);

struct ReplayResult {
    bool ok = false;
    std::size_t frame = 0;  // where the mismatch was detected
    std::string detail;
};

/// Simulates frames 0..step under the witness's inputs and attacks. OK iff
/// the requirement's literal is false at `step`. Latch attacks of frame k
/// act on the state of frame k (the initial state at k = 0).
ReplayResult replay(const Aig& aig, const Witness& witness);

/// {"requirement", "attacker", "step", "inputs": ["01", ...], "attacks": [{"v1": 0}, ...]}
std::string witness_to_json(const Aig& aig, const Witness& witness, int indent = 2);

}  // namespace aigac
