#include "aigac/sat.hpp"

#include "cnf_oracle.hpp"

#include <benchmark/benchmark.h>

using namespace aigac::sat;

namespace {

// Pigeon p in hole h is variable p * holes + h.
aigac::testing::Clauses pigeonhole(int pigeons, int holes)
{
    aigac::testing::Clauses out;
    for (int p = 0; p < pigeons; ++p) {
        std::vector<Lit> c;
        for (int h = 0; h < holes; ++h)
            c.push_back(Lit::make(p * holes + h));
        out.push_back(c);
    }
    for (int h = 0; h < holes; ++h)
        for (int p = 0; p < pigeons; ++p)
            for (int q = p + 1; q < pigeons; ++q)
                out.push_back({Lit::make(p * holes + h, true), Lit::make(q * holes + h, true)});
    return out;
}

void solve_once(benchmark::State& state, Var vars, const aigac::testing::Clauses& cnf)
{
    for (auto _ : state) {
        Solver s;
        s.reserve_vars(vars);
        for (const auto& c : cnf)
            s.add_clause(c);
        benchmark::DoNotOptimize(s.solve());
        state.counters["conflicts"] = static_cast<double>(s.stats().conflicts);
    }
}

void BM_Pigeonhole(benchmark::State& state)
{
    const int holes = static_cast<int>(state.range(0));
    solve_once(state, (holes + 1) * holes, pigeonhole(holes + 1, holes));
}
BENCHMARK(BM_Pigeonhole)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

// Random 3-SAT at the phase transition.
void BM_Random3Sat(benchmark::State& state)
{
    const auto vars = static_cast<Var>(state.range(0));
    std::mt19937_64 rng(static_cast<std::uint64_t>(vars));
    const auto cnf = aigac::testing::random_cnf(rng, vars, static_cast<std::size_t>(vars * 4.26));
    solve_once(state, vars, cnf);
}
BENCHMARK(BM_Random3Sat)->RangeMultiplier(2)->Range(50, 200)->Unit(benchmark::kMillisecond);

// Many assumption-only queries against one formula.
void BM_IncrementalAssumptions(benchmark::State& state)
{
    const Var vars = 80;
    std::mt19937_64 rng(3);
    const auto cnf = aigac::testing::random_cnf(rng, vars, 300);
    Solver s;
    s.reserve_vars(vars);
    for (const auto& c : cnf)
        s.add_clause(c);
    std::uniform_int_distribution<Var> pick(0, vars - 1);
    for (auto _ : state) {
        const Lit a[] = {Lit::make(pick(rng), rng() & 1), Lit::make(pick(rng), rng() & 1),
                         Lit::make(pick(rng), rng() & 1)};
        benchmark::DoNotOptimize(s.solve(a));
    }
}
BENCHMARK(BM_IncrementalAssumptions);

}  // namespace
