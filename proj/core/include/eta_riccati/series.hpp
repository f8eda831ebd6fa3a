#pragma once

// Direct evaluation of the generalized Dirichlet eta family
//
//   eta_a(t) = sum_{m>=0} (-1)^m (a m + 1)^{-t},   a > 0, t > 0,
//
// its term-by-term derivatives, and the scaled logistic function whose
// Gamma expectation reproduces it. Everything else in the library is
// checked against these routines.

#include <cstdint>
#include <vector>

namespace eta_riccati {

/// A validated (a, t) pair; both strictly positive and finite.
class EtaPoint {
 public:
  EtaPoint(double a, double t);

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double t() const noexcept { return t_; }

 private:
  double a_;
  double t_;
};

/// Summation budget for the direct alternating series.
struct SeriesAccuracy {
  std::int64_t max_terms = 100000;
  double tol = 1e-15;

  void validate() const;
};

struct SeriesResult {
  double value = 0.0;
  /// Alternating-series remainder bound; +inf when the tail is not yet monotone.
  double error_estimate = 0.0;
  std::int64_t terms_used = 0;
  bool converged = false;
};

/// f_a(x) = 1 / (1 + e^{-a x}) and its first two derivatives (order 0, 1, 2).
double logistic(double a, double x, int order);

/// Basic discrete function log^k(a l + 1) / (a l + 1)^t.
double basic_discrete(double a, double t, int k, std::int64_t l);

/// Index past which log^k(a m + 1) (a m + 1)^{-t} is strictly decreasing in m:
/// ceil((e^{k/t} - 1) / a). Saturates at INT64_MAX.
std::int64_t monotone_peak_index(double a, double t, int k);

SeriesResult eta_direct(const EtaPoint& p, const SeriesAccuracy& acc = {});

/// k-th derivative in t by term-by-term differentiation.
SeriesResult eta_deriv_direct(const EtaPoint& p, int k, const SeriesAccuracy& acc = {});

/// Derivatives 0..max_k in one pass over the terms (one log and one pow per m).
/// Each entry stops independently, exactly as eta_deriv_direct would.
std::vector<SeriesResult> eta_derivs_direct(const EtaPoint& p, int max_k,
                                            const SeriesAccuracy& acc = {});

/// Direct partial sums over `terms` summands, followed by `passes` rounds of
/// averaging of consecutive partial sums. This is the high-accuracy oracle
/// used to check the geometric algorithm. error_estimate is the change made
/// by the last averaging pass plus a rounding estimate; converged is always
/// true because there is no tolerance target.
SeriesResult eta_deriv_averaged(const EtaPoint& p, int k, std::int64_t terms, int passes = 4);

}  // namespace eta_riccati
