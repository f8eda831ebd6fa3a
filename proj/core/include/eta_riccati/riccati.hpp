#pragma once

// The Riccati layer built on eta_a:
//
//   phi   = eta' / eta          (Riccati field)
//   q     = eta'' / eta         (forcing; phi' + phi^2 = q)
//   phi_e = -q / 2              (reference curve)
//   phi_as = L (a+1)^{-t}, L = log(a+1)   (asymptotic manifold)
//
// plus the curvature function g = eta'' + 2 eta' whose first zero is the
// trapping threshold, higher-order quotients, and the linearized
// contraction factor exp(int q).

#include <cstdint>
#include <vector>

#include "eta_riccati/fastderiv.hpp"
#include "eta_riccati/series.hpp"

namespace eta_riccati {

enum class Method {
  /// Direct alternating series with the SeriesAccuracy budget.
  direct,
  /// Geometric-rate series; accurate for every t > 0.
  fast,
};

struct EvalOptions {
  Method method = Method::fast;
  SeriesAccuracy accuracy{};
  int fast_terms = kMaxTermsBinary64;
  Precision precision = Precision::binary64;
  /// A fast-method value counts as converged when
  /// bound + rounding <= fast_tolerance * max(1, |value|).
  double fast_tolerance = 1e-10;

  /// Plain partial sums over 10^5 summands: the configuration that reproduces
  /// the rounded reference tables digit for digit.
  static EvalOptions reference();
};

/// eta^{(0..max_k)}(t) with the chosen method, as SeriesResults.
std::vector<SeriesResult> eta_derivatives(const EtaPoint& p, int max_k, const EvalOptions& opts = {});

struct RiccatiSample {
  double t = 0.0;
  double eta = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double phi = 0.0;
  double q = 0.0;
  double phi_e = 0.0;
  double phi_as = 0.0;
  double ratio = 0.0;
  /// All three derivative evaluations converged.
  bool converged = false;
  /// Largest error estimate among eta, eta', eta''.
  double max_error = 0.0;
};

RiccatiSample riccati_fields(const EtaPoint& p, const EvalOptions& opts = {});

/// L (a+1)^{-t}.
double asymptotic_manifold(double a, double t);

/// |(phi(t+h) - phi(t-h)) / 2h + phi(t)^2 - q(t)|. Throws ConvergenceError
/// if any underlying evaluation did not converge.
double riccati_residual(const EtaPoint& p, double h, const EvalOptions& opts = {});

/// 2 / log(a+1).
double asymptotic_ratio_limit(double a);

struct ThresholdOptions {
  double window_lo = 0.01;
  double window_hi = 8.0;
  double scan_step = 1e-2;
  double residual_tol = 1e-10;
  int max_iterations = 200;
  /// Require |g| > error estimate at every scan point. Off only for
  /// reproducing results computed from truncated sums.
  bool certify = true;
  EvalOptions eval{};
};

struct ThresholdResult {
  double a = 0.0;
  double t_star = 0.0;
  /// eta'' + 2 eta' at t_star.
  double residual = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Smallest root of eta'' + 2 eta' in the scan window. Every scanned sign
/// must be certified by the evaluation's error estimate (ConvergenceError
/// otherwise); NoCrossingError when the sign is constant on the window or
/// when log(a+1) = 2 exactly.
ThresholdResult trapping_threshold(double a, const ThresholdOptions& opts = {});

/// eta'' + 2 eta' from the derivative series; error estimate and
/// convergence combine those of eta' and eta''.
SeriesResult curvature(const EtaPoint& p, const EvalOptions& opts = {});

/// sum_{m>=1} (-1)^m L_m (L_m - 2) (a m + 1)^{-t} with L_m = log(a m + 1).
SeriesResult curvature_series(const EtaPoint& p, const SeriesAccuracy& acc = {});

/// e^{2t} eta'(t), increasing wherever the curvature is positive.
double rescaled_derivative(const EtaPoint& p, const EvalOptions& opts = {});

struct QuotientSample {
  int k = 0;
  double phi_k = 0.0;
  double phi_ek = 0.0;
  double ratio_k = 0.0;
};

/// eta^{(k)} / eta^{(k-1)} and -eta^{(k+1)} / (2 eta^{(k-1)}). Refuses
/// (DomainError) when |eta^{(k-1)}| <= 1e-12.
QuotientSample higher_quotient(const EtaPoint& p, int k, const EvalOptions& opts = {});

/// exp(int_{t0}^{t1} q_a(s) ds) by adaptive Simpson (abs tol 1e-10, depth 40).
double perturbation_factor(double a, double t0, double t1, const EvalOptions& opts = {});

}  // namespace eta_riccati
