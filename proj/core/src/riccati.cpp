#include "eta_riccati/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eta_riccati/compensated.hpp"
#include "eta_riccati/errors.hpp"
#include "eta_riccati/quadrature.hpp"

namespace eta_riccati {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_converged(const std::vector<SeriesResult>& r) {
  for (const auto& x : r) {
    if (!x.converged) return false;
  }
  return true;
}

void require_converged(const std::vector<SeriesResult>& r, const char* what, double t) {
  if (!all_converged(r)) {
    throw ConvergenceError(std::string(what) + ": series did not converge at t = " + std::to_string(t));
  }
}

double curvature_peak_log(double t) {
  // Larger root of t L^2 - (2t + 2) L + 2 = 0: where |L (L - 2)| e^{-t L} peaks.
  const double b = 2.0 * t + 2.0;
  return (b + std::sqrt(b * b - 8.0 * t)) / (2.0 * t);
}

}  // namespace

EvalOptions EvalOptions::reference() {
  EvalOptions opts;
  opts.method = Method::direct;
  opts.accuracy = SeriesAccuracy{100000, 1e-15};
  return opts;
}

std::vector<SeriesResult> eta_derivatives(const EtaPoint& p, int max_k, const EvalOptions& opts) {
  if (max_k < 0) throw DomainError("eta_derivatives: max_k must be >= 0");
  if (opts.method == Method::direct) return eta_derivs_direct(p, max_k, opts.accuracy);

  std::vector<SeriesResult> out;
  out.reserve(static_cast<std::size_t>(max_k) + 1);
  const FastOptions fopts{opts.precision, 1e-10};
  for (int k = 0; k <= max_k; ++k) {
    const TruncationReport r = eta_deriv_fast(p, k, opts.fast_terms, fopts);
    const double err = r.truncation_bound + r.rounding_estimate;
    out.push_back(SeriesResult{r.value, err, r.N, err <= opts.fast_tolerance * std::max(1.0, std::fabs(r.value))});
  }
  return out;
}

RiccatiSample riccati_fields(const EtaPoint& p, const EvalOptions& opts) {
  const auto d = eta_derivatives(p, 2, opts);
  RiccatiSample s;
  s.t = p.t();
  s.eta = d[0].value;
  s.eta1 = d[1].value;
  s.eta2 = d[2].value;
  s.phi = s.eta1 / s.eta;
  s.q = s.eta2 / s.eta;
  s.phi_e = -s.q / 2.0;
  s.phi_as = asymptotic_manifold(p.a(), p.t());
  s.ratio = s.phi / s.phi_e;
  s.converged = all_converged(d);
  s.max_error = std::max({d[0].error_estimate, d[1].error_estimate, d[2].error_estimate});
  return s;
}

double asymptotic_manifold(double a, double t) {
  if (!(a > 0.0)) throw DomainError("asymptotic_manifold: a must be > 0");
  const double L = std::log1p(a);
  return L * std::exp(-t * L);
}

double riccati_residual(const EtaPoint& p, double h, const EvalOptions& opts) {
  if (!(h > 0.0) || !(p.t() - h > 0.0)) {
    throw DomainError("riccati_residual: need h > 0 and t - h > 0");
  }
  const EtaPoint lo(p.a(), p.t() - h);
  const EtaPoint hi(p.a(), p.t() + h);
  const auto d_lo = eta_derivatives(lo, 1, opts);
  const auto d_hi = eta_derivatives(hi, 1, opts);
  const auto d = eta_derivatives(p, 2, opts);
  require_converged(d_lo, "riccati_residual", lo.t());
  require_converged(d_hi, "riccati_residual", hi.t());
  require_converged(d, "riccati_residual", p.t());
  const double phi_lo = d_lo[1].value / d_lo[0].value;
  const double phi_hi = d_hi[1].value / d_hi[0].value;
  const double phi = d[1].value / d[0].value;
  const double q = d[2].value / d[0].value;
  return std::fabs((phi_hi - phi_lo) / (2.0 * h) + phi * phi - q);
}

double asymptotic_ratio_limit(double a) {
  if (!(a > 0.0)) throw DomainError("asymptotic_ratio_limit: a must be > 0");
  return 2.0 / std::log1p(a);
}

SeriesResult curvature(const EtaPoint& p, const EvalOptions& opts) {
  const auto d = eta_derivatives(p, 2, opts);
  return SeriesResult{d[2].value + 2.0 * d[1].value,
                      d[2].error_estimate + 2.0 * d[1].error_estimate,
                      std::max(d[1].terms_used, d[2].terms_used),
                      d[1].converged && d[2].converged};
}

SeriesResult curvature_series(const EtaPoint& p, const SeriesAccuracy& acc) {
  acc.validate();
  const double a = p.a();
  const double t = p.t();
  const double peak_log = curvature_peak_log(t);
  // Past this index the weights are positive and strictly decreasing.
  const double peak_index = std::ceil(std::expm1(std::min(peak_log, 700.0)) / a);
  const auto peak = peak_index < 9.2e18 ? static_cast<std::int64_t>(peak_index)
                                        : std::numeric_limits<std::int64_t>::max();

  auto weight = [&](std::int64_t m) {
    const double L = std::log1p(a * static_cast<double>(m));
    return L * (L - 2.0) * std::exp(-t * L);
  };

  CompensatedSum sum;
  for (std::int64_t m = 1; m < acc.max_terms; ++m) {
    const double w = weight(m);
    if (m > peak && std::fabs(w) <= acc.tol) {
      return SeriesResult{sum.value(), std::fabs(w), m, true};
    }
    sum.add((m & 1) != 0 ? -w : w);
  }
  const double tail = acc.max_terms > peak ? std::fabs(weight(acc.max_terms)) : kInf;
  return SeriesResult{sum.value(), tail, acc.max_terms, false};
}

double rescaled_derivative(const EtaPoint& p, const EvalOptions& opts) {
  const auto d = eta_derivatives(p, 1, opts);
  return std::exp(2.0 * p.t()) * d[1].value;
}

ThresholdResult trapping_threshold(double a, const ThresholdOptions& opts) {
  if (!(a > 0.0)) throw DomainError("trapping_threshold: a must be > 0");
  if (!(opts.window_lo > 0.0) || !(opts.window_hi > opts.window_lo) || !(opts.scan_step > 0.0)) {
    throw DomainError("trapping_threshold: invalid search window");
  }
  if (std::fabs(std::log1p(a) - 2.0) <= 1e-12) {
    throw NoCrossingError("trapping_threshold: log(a+1) = 2, the asymptotic ratio is exactly 1");
  }

  auto g = [&](double t) {
    const SeriesResult r = curvature(EtaPoint(a, t), opts.eval);
    if (opts.certify && !(std::fabs(r.value) > r.error_estimate) && r.value != 0.0) {
      throw ConvergenceError("trapping_threshold: sign of eta'' + 2 eta' not certified at t = " +
                             std::to_string(t) + " (value " + std::to_string(r.value) + ", error " +
                             std::to_string(r.error_estimate) + ")");
    }
    return r.value;
  };

  const auto steps = static_cast<std::int64_t>(std::ceil((opts.window_hi - opts.window_lo) / opts.scan_step));
  double t_prev = opts.window_lo;
  double g_prev = g(t_prev);
  ThresholdResult out;
  out.a = a;
  if (g_prev == 0.0) {
    out.t_star = out.bracket_lo = out.bracket_hi = t_prev;
    out.iterations = 1;
    return out;
  }
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double t_cur = std::min(opts.window_lo + static_cast<double>(i) * opts.scan_step, opts.window_hi);
    const double g_cur = g(t_cur);
    if (g_cur == 0.0 || std::signbit(g_cur) != std::signbit(g_prev)) {
      double lo = t_prev;
      double hi = t_cur;
      double g_lo = g_prev;
      double mid = hi;
      double g_mid = g_cur;
      int it = 0;
      while (it < opts.max_iterations && std::fabs(g_mid) > opts.residual_tol) {
        ++it;
        mid = 0.5 * (lo + hi);
        // Near the root the sign cannot be certified; use the raw value there.
        g_mid = curvature(EtaPoint(a, mid), opts.eval).value;
        if (std::signbit(g_mid) == std::signbit(g_lo)) {
          lo = mid;
          g_lo = g_mid;
        } else {
          hi = mid;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
      }
      if (std::fabs(g_mid) > opts.residual_tol) {
        throw ConvergenceError("trapping_threshold: bisection stalled with residual " + std::to_string(g_mid));
      }
      out.t_star = mid;
      out.residual = g_mid;
      out.iterations = std::max(it, 1);
      out.bracket_lo = t_prev;
      out.bracket_hi = t_cur;
      return out;
    }
    t_prev = t_cur;
    g_prev = g_cur;
  }
  throw NoCrossingError("trapping_threshold: eta'' + 2 eta' keeps sign " +
                        std::string(g_prev > 0.0 ? "+" : "-") + " on (" + std::to_string(opts.window_lo) +
                        ", " + std::to_string(opts.window_hi) + "] for a = " + std::to_string(a));
}

QuotientSample higher_quotient(const EtaPoint& p, int k, const EvalOptions& opts) {
  if (k < 1) throw DomainError("higher_quotient: k must be >= 1");
  const auto d = eta_derivatives(p, k + 1, opts);
  require_converged(d, "higher_quotient", p.t());
  const double denom = d[static_cast<std::size_t>(k) - 1].value;
  if (!(std::fabs(denom) > 1e-12)) {
    throw DomainError("higher_quotient: |eta^(k-1)| <= 1e-12 at t = " + std::to_string(p.t()));
  }
  QuotientSample s;
  s.k = k;
  s.phi_k = d[static_cast<std::size_t>(k)].value / denom;
  s.phi_ek = -d[static_cast<std::size_t>(k) + 1].value / (2.0 * denom);
  s.ratio_k = s.phi_k / s.phi_ek;
  return s;
}

double perturbation_factor(double a, double t0, double t1, const EvalOptions& opts) {
  if (!(a > 0.0)) throw DomainError("perturbation_factor: a must be > 0");
  if (!(t0 > 0.0) || !(t1 >= t0)) throw DomainError("perturbation_factor: need 0 < t0 <= t1");
  if (t0 == t1) return 1.0;
  auto q = [&](double s) {
    const auto d = eta_derivatives(EtaPoint(a, s), 2, opts);
    require_converged(d, "perturbation_factor", s);
    return d[2].value / d[0].value;
  };
  const QuadratureResult r = adaptive_simpson(q, t0, t1, 1e-10, 40);
  if (!r.converged) {
    throw ConvergenceError("perturbation_factor: quadrature did not reach 1e-10 (estimate " +
                           std::to_string(r.error_estimate) + ")");
  }
  return std::exp(r.value);
}

}  // namespace eta_riccati
