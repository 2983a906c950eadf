// Serial reference vs OpenMP for each parallel kernel.
// Thread count follows OMP_NUM_THREADS / PSPIN_THREADS.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <vector>

#include "pspin/parallel.hpp"
#include "pspin/pathlab.hpp"
#include "pspin/phase_diagram.hpp"
#include "pspin/spinwave.hpp"
#include "pspin/statapprox.hpp"

using namespace pspin;

namespace {

void configure_threads() {
  if (const char* env = std::getenv("PSPIN_THREADS")) set_num_threads(std::atoi(env));
}

void BM_scan_diagram_serial(benchmark::State& state) {
  const ModelParams params(11, 2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_diagram_serial(params, n, n));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_scan_diagram_omp(benchmark::State& state) {
  configure_threads();
  const ModelParams params(11, 2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_diagram(params, n, n));
  state.SetItemsProcessed(state.iterations() * n * n);
  state.counters["threads"] = num_threads();
}

std::vector<double> s_grid(int n) {
  std::vector<double> grid;
  for (int j = 0; j < n; ++j) grid.push_back(static_cast<double>(j) / (n - 1));
  return grid;
}

void BM_gap_profile_serial(benchmark::State& state) {
  const auto grid = s_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gap_profile_serial(ModelParams(11, 3), 0.3, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_gap_profile_omp(benchmark::State& state) {
  configure_threads();
  const auto grid = s_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gap_profile(ModelParams(11, 3), 0.3, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = num_threads();
}

void BM_scan_static_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_static_serial(ModelParams(11, 2), n, n));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_scan_static_omp(benchmark::State& state) {
  configure_threads();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_static(ModelParams(11, 2), n, n));
  state.SetItemsProcessed(state.iterations() * n * n);
  state.counters["threads"] = num_threads();
}

const std::vector<AnnealPoint> kPath = {AnnealPoint(0.3, 0.0), AnnealPoint(0.3, 1.0),
                                        AnnealPoint(1.0, 1.0)};

void BM_path_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_trajectory_serial(kPath, ModelParams(11, 2), n));
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_path_omp(benchmark::State& state) {
  configure_threads();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_trajectory(kPath, ModelParams(11, 2), n));
  state.SetItemsProcessed(state.iterations() * n);
  state.counters["threads"] = num_threads();
}

}  // namespace

BENCHMARK(BM_scan_diagram_serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_diagram_omp)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gap_profile_serial)->Arg(1001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gap_profile_omp)->Arg(1001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_static_serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_static_omp)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_path_serial)->Arg(1001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_path_omp)->Arg(1001)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
