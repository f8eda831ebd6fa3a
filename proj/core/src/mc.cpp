#include "eta_riccati/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "eta_riccati/errors.hpp"

namespace eta_riccati {

void McConfig::validate() const {
  if (samples < 100) throw DomainError("McConfig: samples must be >= 100");
  if (streams < 1) throw DomainError("McConfig: streams must be >= 1");
}

void MomentAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(n_);
  const auto nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double MomentAccumulator::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

McEstimate MomentAccumulator::estimate() const {
  return McEstimate{mean_, n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0, n_};
}

double uniform_open(Rng& rng) {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_gamma(double t, Rng& rng) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("sample_gamma: shape must be > 0");
  if (t < 1.0) {
    const double u = uniform_open(rng);
    return sample_gamma(t + 1.0, rng) * std::pow(u, 1.0 / t);
  }
  const double d = t - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  std::normal_distribution<double> normal;
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_sk(int k, Rng& rng) {
  if (k < 0) throw DomainError("sample_sk: k must be >= 0");
  double s = 0.0;
  for (int j = 0; j < k; ++j) {
    const double u = uniform_open(rng);
    const double e = -std::log(uniform_open(rng));
    s += u * e;
  }
  return s;
}

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("ETA_RICCATI_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<long>(n, cap);
  }
  return n;
}

McEstimate mc_expectation(const std::function<double(Rng&)>& draw, const McConfig& cfg) {
  cfg.validate();
  const auto streams = static_cast<std::size_t>(cfg.streams);
  std::vector<MomentAccumulator> partial(streams);

  auto run_stream = [&](std::size_t s) {
    const std::int64_t base = cfg.samples / cfg.streams;
    const std::int64_t extra = static_cast<std::int64_t>(s) < cfg.samples % cfg.streams ? 1 : 0;
    Rng rng = make_stream(cfg.seed, s);
    MomentAccumulator acc;
    for (std::int64_t i = 0; i < base + extra; ++i) acc.add(draw(rng));
    partial[s] = acc;
  };

  const auto workers = static_cast<std::size_t>(std::min<int>(worker_count(), cfg.streams));
  if (workers <= 1) {
    for (std::size_t s = 0; s < streams; ++s) run_stream(s);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < streams; s += workers) run_stream(s);
      });
    }
  }

  // Merge in stream order so the result is independent of scheduling.
  MomentAccumulator total;
  for (const auto& acc : partial) total.merge(acc);
  return total.estimate();
}

McEstimate mc_eta(const EtaPoint& p, const McConfig& cfg) {
  const double a = p.a();
  const double t = p.t();
  return mc_expectation([a, t](Rng& rng) { return logistic(a, sample_gamma(t, rng), 0); }, cfg);
}

McEstimate mc_eta_deriv(const EtaPoint& p, int k, const McConfig& cfg) {
  if (k < 0 || k > 2) {
    throw ArgumentError("mc_eta_deriv: only orders 0, 1, 2 are supported, got " + std::to_string(k));
  }
  const double a = p.a();
  const double t = p.t();
  return mc_expectation(
      [a, t, k](Rng& rng) {
        const double x = sample_gamma(t, rng);
        return logistic(a, x + sample_sk(k, rng), k);
      },
      cfg);
}

McEstimate mc_sk_laplace(int k, double lambda, const McConfig& cfg) {
  if (k < 0) throw DomainError("mc_sk_laplace: k must be >= 0");
  if (!(lambda >= 0.0)) throw DomainError("mc_sk_laplace: lambda must be >= 0");
  return mc_expectation([k, lambda](Rng& rng) { return std::exp(-lambda * sample_sk(k, rng)); }, cfg);
}

double sk_laplace_exact(int k, double lambda) {
  if (k < 0) throw DomainError("sk_laplace_exact: k must be >= 0");
  if (!(lambda >= 0.0)) throw DomainError("sk_laplace_exact: lambda must be >= 0");
  const double base = lambda == 0.0 ? 1.0 : std::log1p(lambda) / lambda;
  return std::pow(base, k);
}

}  // namespace eta_riccati
