#include "cnf_oracle.hpp"

#include <algorithm>

namespace aigac::testing {

using sat::Lit;
using sat::Var;

Clauses random_cnf(std::mt19937_64& rng, Var vars, std::size_t clauses, std::size_t width)
{
    std::uniform_int_distribution<Var> var(0, vars - 1);
    std::uniform_int_distribution<int> sign(0, 1);
    Clauses out(clauses);
    for (auto& c : out)
        for (std::size_t i = 0; i < width; ++i)
            c.push_back(Lit::make(var(rng), sign(rng) == 1));
    return out;
}

// Exhaustive satisfiability check, 64 assignments per word.
bool truth_table_sat(Var vars, const Clauses& clauses)
{
    static const std::uint64_t low_masks[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
                                               0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    const std::uint64_t total = std::uint64_t{1} << vars;
    const std::uint64_t words = std::max<std::uint64_t>(1, total / 64);
    const std::uint64_t valid = total >= 64 ? ~0ull : (std::uint64_t{1} << total) - 1;
    for (std::uint64_t w = 0; w < words; ++w) {
        std::uint64_t all = valid;
        for (const auto& c : clauses) {
            std::uint64_t any = 0;
            for (Lit l : c) {
                const Var v = l.var();
                std::uint64_t m = v < 6 ? low_masks[v] : (((w >> (v - 6)) & 1u) ? ~0ull : 0);
                any |= l.negated() ? ~m : m;
            }
            all &= any;
            if (all == 0)
                break;
        }
        if (all != 0)
            return true;
    }
    return false;
}

}  // namespace aigac::testing
