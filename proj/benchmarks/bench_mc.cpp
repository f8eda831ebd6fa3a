#include <benchmark/benchmark.h>

#include "eta_riccati/mc.hpp"

using namespace eta_riccati;

static void BM_SampleGamma(benchmark::State& state) {
  const double shape = static_cast<double>(state.range(0)) / 10.0;
  Rng rng = make_stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_gamma(shape, rng));
}
BENCHMARK(BM_SampleGamma)->Arg(3)->Arg(10)->Arg(25);

// Wall time across the worker pool; ETA_RICCATI_THREADS caps the worker count.
static void BM_McEtaDeriv(benchmark::State& state) {
  McConfig cfg;
  cfg.samples = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(mc_eta_deriv(EtaPoint(1.0, 1.0), 1, cfg).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McEtaDeriv)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond)->UseRealTime();
