#include <vector>

#include <benchmark/benchmark.h>

#include "memfilter/harness.hpp"
#include "memfilter/memory_filter.hpp"
#include "memfilter/noise.hpp"
#include "memfilter/random.hpp"
#include "memfilter/system.hpp"
#include "memfilter/volterra.hpp"

using namespace memfilter;

namespace {

SystemSpec theta2() { return experiment_system(find_preset("theta2"), ExperimentSettings{}); }

void BM_SimulateV(benchmark::State& state) {
  const Grid g = make_grid(10.0, 10.0 / static_cast<double>(state.range(0)));
  RandomStream s(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_v({0.5, 0.3}, g, s).v.back());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateV)->Arg(1000)->Arg(10000);

void BM_Riccati(benchmark::State& state) {
  const Grid g = make_grid(10.0, 10.0 / static_cast<double>(state.range(0)));
  const SystemSpec s = theta2();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_riccati(s, g).back()(0, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Riccati)->Arg(1000)->Arg(10000);

void BM_FilterRun(benchmark::State& state) {
  const Grid g = make_grid(10.0, 0.01);
  const SystemSpec s = theta2();
  RandomStream a(1, 0), b(1, 1);
  const std::vector<double> y = simulate_system(s, g, a, b).y;
  const MemoryFilter f(s, g);
  std::vector<double> xhat(g.size());
  for (auto _ : state) {
    f.run_state(y, xhat);
    benchmark::DoNotOptimize(xhat.back());
  }
}
BENCHMARK(BM_FilterRun);

void BM_VolterraMarch(benchmark::State& state) {
  const SystemSpec s = theta2();
  const Grid g = make_grid(1.0, 1.0 / static_cast<double>(state.range(0)));
  auto gamma = std::make_shared<const GammaTable>(build_gamma_for_system(s, g));
  const ObservationKernelSpec obs = observation_kernel(s);
  for (auto _ : state) benchmark::DoNotOptimize(solve_error_table(gamma, obs, g).diagonal(g.count));
}
BENCHMARK(BM_VolterraMarch)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GammaTable(benchmark::State& state) {
  const SystemSpec s = theta2();
  const Grid g = make_grid(1.0, 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_gamma_for_system(s, g).at(g.count, 0));
}
BENCHMARK(BM_GammaTable)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MonteCarloCompare(benchmark::State& state) {
  const Grid g = make_grid(10.0, 0.01);
  const ThetaPreset p = find_preset("theta2");
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_compare(p, 100, g, 1).aen_optimal);
}
BENCHMARK(BM_MonteCarloCompare)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
