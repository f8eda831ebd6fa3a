#pragma once

// Monte Carlo checks of the probabilistic layer:
//   eta_a(t)       = E[f_a(X_t)],            X_t ~ Gamma(t, 1)
//   eta_a^{(k)}(t) = E[f_a^{(k)}(X_t + S_k)], S_k = sum_{j<=k} U_j T_j
//   E[exp(-lambda S_k)] = (log(1 + lambda) / lambda)^k

#include <cstdint>
#include <functional>
#include <random>

#include "eta_riccati/series.hpp"

namespace eta_riccati {

using Rng = std::mt19937_64;

struct McConfig {
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Work is cut into this many independently seeded streams regardless of
  /// thread count, so results do not depend on the machine.
  int streams = 64;

  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Running mean / M2 accumulator (Welford); merge is Chan's pairwise update.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);
  [[nodiscard]] std::int64_t count() const noexcept { return n_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  /// Unbiased sample variance.
  [[nodiscard]] double variance() const noexcept;
  [[nodiscard]] McEstimate estimate() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Uniform on the open interval (0, 1) from the top 53 bits.
double uniform_open(Rng& rng);

/// Gamma(shape t, rate 1): Marsaglia-Tsang squeeze for t >= 1, shape boost
/// X_{t+1} U^{1/t} for t < 1.
double sample_gamma(double t, Rng& rng);

/// S_k = sum_{j=1}^k U_j T_j with U ~ Uniform(0,1), T ~ Exp(1). S_0 = 0.
double sample_sk(int k, Rng& rng);

/// Engine for stream `index` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

/// Mean and stderr of draw(rng) over cfg.samples draws, split across
/// cfg.streams streams and run on up to worker_count() threads.
McEstimate mc_expectation(const std::function<double(Rng&)>& draw, const McConfig& cfg);

/// Threads used by mc_expectation and the report sweeps: hardware
/// concurrency, capped by ETA_RICCATI_THREADS when set.
int worker_count();

McEstimate mc_eta(const EtaPoint& p, const McConfig& cfg = {});

/// k in {0, 1, 2}; ArgumentError otherwise.
McEstimate mc_eta_deriv(const EtaPoint& p, int k, const McConfig& cfg = {});

/// Empirical E[exp(-lambda S_k)].
McEstimate mc_sk_laplace(int k, double lambda, const McConfig& cfg = {});

/// (log(1 + lambda) / lambda)^k, with the lambda -> 0 limit 1.
double sk_laplace_exact(int k, double lambda);

}  // namespace eta_riccati
