#include "eta_riccati/series.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eta_riccati/compensated.hpp"
#include "eta_riccati/errors.hpp"

namespace eta_riccati {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_order(int k) {
  if (k < 0) throw DomainError("derivative order must be nonnegative, got " + std::to_string(k));
}

// log^k(x) with log^0 = 1 even when log(x) = 0.
double power_of_log(double log_value, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= log_value;
  return r;
}

}  // namespace

EtaPoint::EtaPoint(double a, double t) : a_(a), t_(t) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("a must be a finite positive real, got " + std::to_string(a));
  }
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("t must be a finite positive real, got " + std::to_string(t));
  }
}

void SeriesAccuracy::validate() const {
  if (max_terms < 1) throw DomainError("max_terms must be >= 1");
  if (!(tol > 0.0)) throw DomainError("tol must be > 0");
}

double logistic(double a, double x, int order) {
  if (!(a > 0.0)) throw DomainError("logistic: a must be > 0");
  if (!(x >= 0.0)) throw DomainError("logistic: x must be >= 0");
  const double e = std::exp(-a * x);
  const double f = 1.0 / (1.0 + e);
  // 1 - f computed as e / (1 + e) keeps full relative accuracy for large x.
  const double g = e / (1.0 + e);
  switch (order) {
    case 0:
      return f;
    case 1:
      return a * f * g;
    case 2:
      return a * a * f * g * (g - f);
    default:
      throw DomainError("logistic: order must be 0, 1 or 2, got " + std::to_string(order));
  }
}

double basic_discrete(double a, double t, int k, std::int64_t l) {
  if (!(a > 0.0) || !(t > 0.0)) throw DomainError("basic_discrete: a and t must be > 0");
  require_order(k);
  if (l < 0) throw DomainError("basic_discrete: l must be >= 0");
  if (l == 0) return k == 0 ? 1.0 : 0.0;
  const double x = a * static_cast<double>(l);
  const double lg = std::log1p(x);
  return power_of_log(lg, k) * std::exp(-t * lg);
}

std::int64_t monotone_peak_index(double a, double t, int k) {
  if (k == 0) return 0;
  const double expo = static_cast<double>(k) / t;
  // Beyond ~ 43 the peak index no longer fits in int64 for any a >= 1e-300.
  if (expo > 700.0) return std::numeric_limits<std::int64_t>::max();
  const double peak = std::ceil(std::expm1(expo) / a);
  if (!(peak < 9.2e18)) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(peak);
}

std::vector<SeriesResult> eta_derivs_direct(const EtaPoint& p, int max_k,
                                            const SeriesAccuracy& acc) {
  require_order(max_k);
  acc.validate();
  const double a = p.a();
  const double t = p.t();
  const auto orders = static_cast<std::size_t>(max_k) + 1;

  std::vector<std::int64_t> peak(orders);
  for (std::size_t k = 0; k < orders; ++k) peak[k] = monotone_peak_index(a, t, static_cast<int>(k));

  std::vector<CompensatedSum> sums(orders);
  std::vector<SeriesResult> out(orders);
  std::vector<bool> active(orders, true);
  std::size_t remaining = orders;

  for (std::int64_t m = 0; m < acc.max_terms && remaining > 0; ++m) {
    const double lg = m == 0 ? 0.0 : std::log1p(a * static_cast<double>(m));
    const double w = std::exp(-t * lg);
    double lk = 1.0;  // log^k(am+1)
    for (std::size_t k = 0; k < orders; ++k, lk *= lg) {
      if (!active[k]) continue;
      const double magnitude = lk * w;
      // magnitude is the first omitted term if we stop before adding it.
      if (m > peak[k] && magnitude <= acc.tol) {
        out[k] = SeriesResult{sums[k].value(), magnitude, m, true};
        active[k] = false;
        --remaining;
        continue;
      }
      // (-1)^m (-log)^k = (-1)^{m+k} log^k
      const bool negative = ((m + static_cast<std::int64_t>(k)) & 1) != 0;
      sums[k].add(negative ? -magnitude : magnitude);
    }
  }

  if (remaining > 0) {
    const double lg = std::log1p(a * static_cast<double>(acc.max_terms));
    const double w = std::exp(-t * lg);
    double lk = 1.0;
    for (std::size_t k = 0; k < orders; ++k, lk *= lg) {
      if (!active[k]) continue;
      const double tail = acc.max_terms > peak[k] ? lk * w : kInf;
      out[k] = SeriesResult{sums[k].value(), tail, acc.max_terms, false};
    }
  }
  return out;
}

SeriesResult eta_deriv_direct(const EtaPoint& p, int k, const SeriesAccuracy& acc) {
  require_order(k);
  acc.validate();
  const double a = p.a();
  const double t = p.t();
  const std::int64_t peak = monotone_peak_index(a, t, k);

  CompensatedSum sum;
  for (std::int64_t m = 0; m < acc.max_terms; ++m) {
    const double magnitude = basic_discrete(a, t, k, m);
    if (m > peak && magnitude <= acc.tol) {
      return SeriesResult{sum.value(), magnitude, m, true};
    }
    const bool negative = ((m + k) & 1) != 0;
    sum.add(negative ? -magnitude : magnitude);
  }
  const double tail = acc.max_terms > peak ? basic_discrete(a, t, k, acc.max_terms) : kInf;
  return SeriesResult{sum.value(), tail, acc.max_terms, false};
}

SeriesResult eta_direct(const EtaPoint& p, const SeriesAccuracy& acc) {
  return eta_deriv_direct(p, 0, acc);
}

SeriesResult eta_deriv_averaged(const EtaPoint& p, int k, std::int64_t terms, int passes) {
  require_order(k);
  if (terms < 1) throw DomainError("eta_deriv_averaged: terms must be >= 1");
  if (passes < 1) throw DomainError("eta_deriv_averaged: passes must be >= 1");
  const double a = p.a();
  const double t = p.t();

  CompensatedSum sum;
  double square_sum = 0.0;
  auto add_term = [&](std::int64_t m) {
    const double magnitude = basic_discrete(a, t, k, m);
    square_sum += magnitude * magnitude;
    sum.add(((m + k) & 1) != 0 ? -magnitude : magnitude);
  };
  for (std::int64_t m = 0; m < terms; ++m) add_term(m);

  // Partial sums S_{terms-1}, ..., S_{terms-1+passes}.
  std::vector<double> level;
  level.reserve(static_cast<std::size_t>(passes) + 1);
  level.push_back(sum.value());
  for (int j = 0; j < passes; ++j) {
    add_term(terms + j);
    level.push_back(sum.value());
  }

  double previous = level.front();
  while (level.size() > 1) {
    previous = level.front();
    for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = 0.5 * (level[i] + level[i + 1]);
    level.pop_back();
  }
  const double value = level.front();
  // Each term carries ~ one ulp of evaluation error; they add up like a random walk.
  const double rounding = 4.0 * kEps * (std::fabs(value) + std::sqrt(square_sum));
  return SeriesResult{value, std::fabs(value - previous) + rounding, terms + passes, true};
}

}  // namespace eta_riccati
