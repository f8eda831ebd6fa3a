#include <benchmark/benchmark.h>

#include "eta_riccati/fastderiv.hpp"

using namespace eta_riccati;

static void BM_FastBinary64(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eta_deriv_fast(EtaPoint(1.0, 1.0), k, N).value);
  }
}
BENCHMARK(BM_FastBinary64)->ArgsProduct({{10, 20, 30, 40}, {0, 2}});

static void BM_FastDoubleDouble(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const FastOptions dd{Precision::double_double};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eta_deriv_fast(EtaPoint(1.0, 1.0), 1, N, dd).value);
  }
}
BENCHMARK(BM_FastDoubleDouble)->Arg(40)->Arg(60)->Arg(80);

static void BM_CoeffTable(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_coeff_table(2.0, 0.5, 3, count).coeffs.data());
  }
}
BENCHMARK(BM_CoeffTable)->Arg(10)->Arg(20)->Arg(40);
