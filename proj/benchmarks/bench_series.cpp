#include <benchmark/benchmark.h>

#include "eta_riccati/series.hpp"

using namespace eta_riccati;

// Direct alternating sums; cost grows with the terms needed to reach tolerance.
static void BM_EtaDerivDirect(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eta_deriv_direct(EtaPoint(1.0, t), k).value);
  }
}
BENCHMARK(BM_EtaDerivDirect)->Args({4, 0})->Args({4, 2})->Args({30, 0})->Args({30, 2});

static void BM_EtaDerivAveraged(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(eta_deriv_averaged(EtaPoint(2.0, 1.0), 1, state.range(0)).value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EtaDerivAveraged)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity(benchmark::oN);
