#include <benchmark/benchmark.h>

#include <cmath>

#include "shrinkedge/sweep.hpp"

using namespace shrinkedge;

namespace {

std::vector<double> grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(10.0, -1.0 - 7.0 * double(i) / double(n - 1));
  return g;
}

const VertexCondition kCase = Rank0{-1.0, -3.0, cplx{0.3, 0.2}};

void BM_SweepSerial(benchmark::State& state) {
  const auto g = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(kCase, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto g = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_parallel(kCase, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(9)->Arg(256)->Arg(4096)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(9)->Arg(256)->Arg(4096)->UseRealTime();

BENCHMARK_MAIN();
