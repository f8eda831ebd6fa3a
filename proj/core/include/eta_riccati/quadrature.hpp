#pragma once

#include <functional>

namespace eta_riccati {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Adaptive Simpson on [lo, hi] with absolute tolerance and maximum bisection depth.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  double abs_tol = 1e-10, int max_depth = 40);

}  // namespace eta_riccati
