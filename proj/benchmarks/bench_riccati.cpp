#include <benchmark/benchmark.h>

#include "eta_riccati/riccati.hpp"

using namespace eta_riccati;

static void BM_RiccatiFields(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(riccati_fields(EtaPoint(10.0, 0.5)).phi);
  }
}
BENCHMARK(BM_RiccatiFields);

static void BM_TrappingThreshold(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(trapping_threshold(10.0).t_star);
  }
}
BENCHMARK(BM_TrappingThreshold)->Unit(benchmark::kMillisecond);

static void BM_PerturbationFactor(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(perturbation_factor(1.0, 1.0, 30.0));
  }
}
BENCHMARK(BM_PerturbationFactor)->Unit(benchmark::kMillisecond);
