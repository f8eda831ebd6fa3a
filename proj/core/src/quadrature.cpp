#include "eta_riccati/quadrature.hpp"

#include <cmath>

namespace eta_riccati {

namespace {

struct Panel {
  double lo, mid, hi;
  double f_lo, f_mid, f_hi;
  double whole;
};

double simpson(double lo, double hi, double f_lo, double f_mid, double f_hi) {
  return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
}

void refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
            QuadratureResult& acc) {
  const double left_mid = 0.5 * (p.lo + p.mid);
  const double right_mid = 0.5 * (p.mid + p.hi);
  const double f_lm = f(left_mid);
  const double f_rm = f(right_mid);
  acc.evaluations += 2;
  const double left = simpson(p.lo, p.mid, p.f_lo, f_lm, p.f_mid);
  const double right = simpson(p.mid, p.hi, p.f_mid, f_rm, p.f_hi);
  const double delta = left + right - p.whole;
  if (std::fabs(delta) <= 15.0 * tol) {
    acc.value += left + right + delta / 15.0;
    acc.error_estimate += std::fabs(delta) / 15.0;
    return;
  }
  if (depth <= 0) {
    acc.value += left + right + delta / 15.0;
    acc.error_estimate += std::fabs(delta) / 15.0;
    acc.converged = false;
    return;
  }
  refine(f, Panel{p.lo, left_mid, p.mid, p.f_lo, f_lm, p.f_mid, left}, 0.5 * tol, depth - 1, acc);
  refine(f, Panel{p.mid, right_mid, p.hi, p.f_mid, f_rm, p.f_hi, right}, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  double abs_tol, int max_depth) {
  QuadratureResult acc;
  acc.converged = true;
  if (lo == hi) return acc;
  const double mid = 0.5 * (lo + hi);
  const double f_lo = f(lo);
  const double f_mid = f(mid);
  const double f_hi = f(hi);
  acc.evaluations = 3;
  const Panel root{lo, mid, hi, f_lo, f_mid, f_hi, simpson(lo, hi, f_lo, f_mid, f_hi)};
  refine(f, root, abs_tol, max_depth, acc);
  return acc;
}

}  // namespace eta_riccati
