#pragma once

#include "aigac/aig.hpp"
#include "aigac/structure.hpp"

#include <optional>
#include <vector>

namespace aigac::testing {

/// Explicit-state search over the compromised system, independent of the
/// library's simulator and encoder. Frame by frame it enumerates every input
/// vector and every value of the attacked components from each reachable
/// state of the unattacked latches. Returns the first frame ≤ max_steps at
/// which the requirement's literal can be false, if any.
std::optional<std::size_t> earliest_violation(const Aig& aig, const ComponentSet& attacker, std::size_t requirement,
                                              std::size_t max_steps);

/// The same search for every requirement at once.
std::vector<std::optional<std::size_t>> earliest_violations(const Aig& aig, const ComponentSet& attacker,
                                                           std::size_t max_steps);

inline bool oracle_breaks(const Aig& aig, const ComponentSet& attacker, std::size_t requirement, std::size_t steps)
{
    return earliest_violation(aig, attacker, requirement, steps).has_value();
}

}  // namespace aigac::testing
