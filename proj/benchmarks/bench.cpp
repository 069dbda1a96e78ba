#include "holoscope/fuchsian.hpp"
#include "holoscope/reconstruct.hpp"
#include "holoscope/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace holo;

namespace {

Scenario grafted(std::vector<double> times, int radius) {
    ScenarioRecipe r;
    r.tip = {0.1, 0.2, -0.3};
    r.grafting = GraftingDatum{GroupWord{1}, 0.5};
    r.times = std::move(times);
    r.ball_radius = radius;
    return make_scenario(r);
}

void BM_EnumerateBall(benchmark::State& state) {
    const auto gens = genus_g_surface_group(2);
    const int radius = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_ball(gens, radius).size());
}
BENCHMARK(BM_EnumerateBall)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_SimulateScan(benchmark::State& state) {
    const Scenario s = grafted({2.0, 4.0}, 3);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_scan(s.observer, s.holonomy, s.times, {3, threads}).size());
}
BENCHMARK(BM_SimulateScan)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ReconstructStatic(benchmark::State& state) {
    const Scenario s = make_scenario({});
    const auto events = simulate_scan(s.observer, s.holonomy, s.times, {3, 1});
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct_static(events).pairings.size());
}
BENCHMARK(BM_ReconstructStatic)->Unit(benchmark::kMillisecond);

void BM_ReconstructEvolving(benchmark::State& state) {
    const Scenario s = grafted({2.0, 4.0, 8.0, 16.0}, 3);
    const auto events = simulate_scan(s.observer, s.holonomy, s.times, {3, 1});
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct_evolving(events).pairings.size());
}
BENCHMARK(BM_ReconstructEvolving)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
