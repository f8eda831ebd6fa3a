#pragma once

#include <cmath>

namespace eta_riccati {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  explicit constexpr CompensatedSum(double init) : sum_(init) {}

  void add(double x) {
    const double s = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - s) + x;
    } else {
      comp_ += (x - s) + sum_;
    }
    sum_ = s;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace eta_riccati
