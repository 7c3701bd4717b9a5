// Serial reference against the OpenMP kernels. Both paths return the same
// bits, so only the timings differ.

#include <benchmark/benchmark.h>

#include <vector>

#include "shrinkage/dominance.hpp"
#include "shrinkage/estimators.hpp"
#include "shrinkage/risk.hpp"

namespace {

using shrinkage::Execution;

void simulate(benchmark::State& state, Execution exec) {
  const auto fam = shrinkage::PhiFamily::alpha(5, 2.0);
  const shrinkage::McConfig cfg{static_cast<std::size_t>(state.range(0)), 7, true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(shrinkage::simulate_risk(fam, 4.0, cfg, exec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void grid(benchmark::State& state, Execution exec) {
  const auto fam = shrinkage::PhiFamily::alpha(5, 20.0);
  const std::vector<double> w = shrinkage::dominance_grid(1e4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(shrinkage::evaluate_grid(fam, w, exec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_simulate_risk_serial(benchmark::State& s) { simulate(s, Execution::Serial); }
void BM_simulate_risk_parallel(benchmark::State& s) { simulate(s, Execution::Parallel); }
void BM_evaluate_grid_serial(benchmark::State& s) { grid(s, Execution::Serial); }
void BM_evaluate_grid_parallel(benchmark::State& s) { grid(s, Execution::Parallel); }

}  // namespace

BENCHMARK(BM_simulate_risk_serial)->Arg(1 << 18)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_simulate_risk_parallel)->Arg(1 << 18)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_evaluate_grid_serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_evaluate_grid_parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
