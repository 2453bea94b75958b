// Serial reference vs OpenMP for each data-parallel kernel. The second
// benchmark argument selects the policy: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <cmath>

#include "faithful/analytic.hpp"
#include "faithful/kernels.hpp"
#include "faithful/tomography.hpp"

using namespace faithful;

namespace {

Exec policy(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) ? "parallel x" + std::to_string(parallel_threads()) : "serial");
}

void BM_ScanSingle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ScanSpec spec;
  spec.theta = Range{0.05, 1.5, n};
  spec.nu_a = Range{0.0, 0.99, n};
  for (auto _ : state) benchmark::DoNotOptimize(scan(spec, policy(state)));
  state.SetItemsProcessed(state.iterations() * n * n);
  label(state);
}

void BM_BatchRandomStates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(batch_random_states(n, 7, policy(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

void BM_BatchFefSpectral(benchmark::State& state) {
  const auto states = batch_random_states(static_cast<std::size_t>(state.range(0)), 11, Exec::Parallel);
  for (auto _ : state) benchmark::DoNotOptimize(batch_fef_spectral(states, policy(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

void BM_BatchConcurrence(benchmark::State& state) {
  const auto states = batch_random_states(static_cast<std::size_t>(state.range(0)), 13, Exec::Parallel);
  for (auto _ : state) benchmark::DoNotOptimize(batch_concurrence(states, policy(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

void BM_FefSampleArgmax(benchmark::State& state) {
  const DensityMatrix rho = random_state(17, 3);
  const int budget = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fef_sample_argmax(rho, budget, 19, policy(state)));
  state.SetItemsProcessed(state.iterations() * budget);
  label(state);
}

void BM_Bootstrap(benchmark::State& state) {
  TomoConfig cfg;
  cfg.seed = 23;
  const CountModel model = CountModel::from(cfg);
  const auto records = simulate_counts(filtered_state(SingleFilterScenario{0.5 * std::acos(-0.181), 0.3}), cfg);
  const int resamples = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(metrics_with_errorbars(records, model, resamples, 29, policy(state)));
  state.SetItemsProcessed(state.iterations() * resamples);
  label(state);
}

}  // namespace

BENCHMARK(BM_ScanSingle)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchRandomStates)->ArgsProduct({{10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchFefSpectral)->ArgsProduct({{10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchConcurrence)->ArgsProduct({{10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FefSampleArgmax)->ArgsProduct({{4096, 65536}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bootstrap)->ArgsProduct({{50}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
