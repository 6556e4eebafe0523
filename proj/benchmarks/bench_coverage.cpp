#include "aigac/coverage.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace aigac;

namespace {

ComponentSet latches(std::uint32_t n)
{
    ComponentSet out;
    for (std::uint32_t i = 0; i < n; ++i)
        out.insert(latch_id(i));
    return out;
}

std::vector<ComponentSet> random_family(std::uint32_t universe, std::size_t sets, std::size_t width)
{
    std::mt19937_64 rng(universe * 31 + sets);
    std::uniform_int_distribution<std::uint32_t> pick(0, universe - 1);
    std::vector<ComponentSet> out(sets);
    for (auto& s : out)
        while (s.size() < width)
            s.insert(latch_id(pick(rng)));
    return out;
}

void BM_CountBreakingExact(benchmark::State& state)
{
    const ComponentSet u = latches(130);
    const auto family = random_family(40, static_cast<std::size_t>(state.range(0)), 3);
    bool sampled = false;
    for (auto _ : state) {
        const BreakCount c = count_breaking(family, u);
        sampled = c.sampled.has_value();
        benchmark::DoNotOptimize(c);
    }
    state.counters["sampled"] = sampled ? 1 : 0;
}
BENCHMARK(BM_CountBreakingExact)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);

void BM_CountBreakingSampled(benchmark::State& state)
{
    const ComponentSet u = latches(130);
    const auto family = random_family(130, 64, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(count_breaking_sampled(family, u, static_cast<std::uint64_t>(state.range(0)), 1));
}
BENCHMARK(BM_CountBreakingSampled)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_CountSafe(benchmark::State& state)
{
    const ComponentSet u = latches(130);
    const ComponentSet cone = latches(59);
    const auto failing = random_family(59, static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(count_safe(false, failing, cone, u));
}
BENCHMARK(BM_CountSafe)->RangeMultiplier(8)->Range(64, 32768)->Unit(benchmark::kMillisecond);

}  // namespace
