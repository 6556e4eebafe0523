#include "aigac/classify.hpp"

#include "random_aig.hpp"

#include <benchmark/benchmark.h>

using namespace aigac;

namespace {

Options unlimited(std::size_t steps, Universe universe)
{
    Options o;
    o.steps = steps;
    o.budget.reset();
    o.universe = universe;
    return o;
}

void BM_WorkedExample(benchmark::State& state)
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);
    const Options o = unlimited(10, Universe::latches_and_gates);
    for (auto _ : state)
        benchmark::DoNotOptimize(all_minimal_attackers(an, o));
}
BENCHMARK(BM_WorkedExample);

// Search modes on a fixed random circuit; arguments are isolation, monotonicity.
void BM_RandomCircuit(benchmark::State& state)
{
    // 13 latches; the four modes need between 34 and 760 SAT calls.
    std::mt19937_64 rng(30);
    const Aig aig = testing::random_aig(rng, {4, 14, 60, 4});
    const StructureAnalysis an(aig);
    Options o = unlimited(6, Universe::latches_only);
    o.isolation = state.range(0) != 0;
    o.monotonicity = state.range(1) != 0;
    std::size_t calls = 0;
    for (auto _ : state) {
        const Classification c = all_minimal_attackers(an, o);
        calls = c.sat_calls();
        benchmark::DoNotOptimize(c);
    }
    state.counters["sat_calls"] = static_cast<double>(calls);
}
BENCHMARK(BM_RandomCircuit)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_NaiveClassifier(benchmark::State& state)
{
    // 9 latches, so 512 attackers per requirement.
    std::mt19937_64 rng(21);
    const Aig aig = testing::random_aig(rng, {4, 14, 60, 4});
    const StructureAnalysis an(aig);
    const Options o = unlimited(6, Universe::latches_only);
    std::size_t calls = 0;
    for (auto _ : state) {
        const NaiveResult r = naive_classify(an, o);
        calls = r.sat_calls;
        benchmark::DoNotOptimize(r);
    }
    state.counters["sat_calls"] = static_cast<double>(calls);
}
BENCHMARK(BM_NaiveClassifier)->Unit(benchmark::kMillisecond);

}  // namespace
