#include "oracle.hpp"

#include <set>
#include <stdexcept>
#include <vector>

namespace aigac::testing {

namespace {

bool value_of(Literal lit, const std::vector<std::uint8_t>& val)
{
    return (val[lit.var()] != 0) != lit.negated();
}

}  // namespace

std::vector<std::optional<std::size_t>> earliest_violations(const Aig& aig, const ComponentSet& attacker,
                                                           std::size_t max_steps)
{
    const auto latches = aig.latches();
    const auto gates = aig.gates();
    const auto inputs = aig.inputs();
    std::vector<bool> latch_attacked(latches.size()), gate_attacked(gates.size());
    std::vector<std::size_t> attacked_latches, attacked_gates;
    for (auto id : attacker) {
        if (id.kind == ComponentKind::latch) {
            latch_attacked[id.index] = true;
            attacked_latches.push_back(id.index);
        } else if (id.kind == ComponentKind::gate) {
            gate_attacked[id.index] = true;
            attacked_gates.push_back(id.index);
        } else {
            throw std::invalid_argument("oracle attackers cannot contain inputs");
        }
    }
    const std::size_t free_bits = inputs.size() + attacked_latches.size() + attacked_gates.size();
    if (free_bits > 24 || latches.size() > 60)
        throw std::invalid_argument("oracle circuit too large");
    const auto reqs = aig.requirements();
    std::vector<std::optional<std::size_t>> found(reqs.size());
    std::size_t open = reqs.size();

    std::uint64_t init = 0;
    for (std::size_t i = 0; i < latches.size(); ++i)
        if (!latch_attacked[i] && latches[i].init)
            init |= std::uint64_t{1} << i;

    std::set<std::uint64_t> frontier{init};
    std::vector<std::uint8_t> val(aig.max_var() + 1, 0);
    for (std::size_t k = 0; k <= max_steps && open > 0; ++k) {
        std::set<std::uint64_t> next;
        for (auto state : frontier) {
            for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << free_bits); ++choice) {
                std::size_t bit = 0;
                auto take = [&] { return static_cast<std::uint8_t>((choice >> bit++) & 1u); };
                val[0] = 0;
                for (auto v : inputs)
                    val[v] = take();
                for (std::size_t i = 0; i < latches.size(); ++i)
                    if (!latch_attacked[i])
                        val[latches[i].var] = static_cast<std::uint8_t>((state >> i) & 1u);
                for (auto i : attacked_latches)
                    val[latches[i].var] = take();
                std::vector<std::uint8_t> gate_choice(gates.size());
                for (auto i : attacked_gates)
                    gate_choice[i] = take();
                for (std::size_t i = 0; i < gates.size(); ++i) {
                    const auto& g = gates[i];
                    val[g.var] = gate_attacked[i] ? gate_choice[i]
                                                  : static_cast<std::uint8_t>(value_of(g.rhs0, val) &&
                                                                              value_of(g.rhs1, val));
                }
                for (std::size_t r = 0; r < reqs.size(); ++r) {
                    if (!found[r] && !value_of(reqs[r].good, val)) {
                        found[r] = k;
                        --open;
                    }
                }
                std::uint64_t succ = 0;
                for (std::size_t i = 0; i < latches.size(); ++i)
                    if (!latch_attacked[i] && value_of(latches[i].next, val))
                        succ |= std::uint64_t{1} << i;
                next.insert(succ);
            }
        }
        frontier = std::move(next);
    }
    return found;
}

std::optional<std::size_t> earliest_violation(const Aig& aig, const ComponentSet& attacker, std::size_t requirement,
                                              std::size_t max_steps)
{
    return earliest_violations(aig, attacker, max_steps).at(requirement);
}

}  // namespace aigac::testing
