#include "eta_riccati/double_double.hpp"

#include <cmath>
#include <limits>

namespace eta_riccati {

namespace {

constexpr DoubleDouble kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};

}  // namespace

DoubleDouble DoubleDouble::from_uint128(uint128 v) {
  const auto upper = static_cast<std::uint64_t>(v >> 64);
  const auto lower = static_cast<std::uint64_t>(v);
  // Split 64-bit halves into 32-bit pieces so every piece is exact in a double.
  const double p3 = std::ldexp(static_cast<double>(upper >> 32), 96);
  const double p2 = std::ldexp(static_cast<double>(upper & 0xffffffffu), 64);
  const double p1 = std::ldexp(static_cast<double>(lower >> 32), 32);
  const double p0 = static_cast<double>(lower & 0xffffffffu);
  DoubleDouble r(p3);
  r += DoubleDouble(p2);
  r += DoubleDouble(p1);
  r += DoubleDouble(p0);
  return r;
}

DoubleDouble exp(const DoubleDouble& x) {
  if (x.hi == 0.0) return DoubleDouble(1.0);
  if (x.hi > 709.0) return DoubleDouble(std::numeric_limits<double>::infinity());
  if (x.hi < -745.0) return DoubleDouble(0.0);

  const double k = std::nearbyint(x.hi / kLn2.hi);
  DoubleDouble r = x - kLn2 * DoubleDouble(k);

  // Reduce further by 2^-10, then square back up.
  constexpr int kSquarings = 10;
  r = r * DoubleDouble(std::ldexp(1.0, -kSquarings));

  // |r| < 3.4e-4 here; 12 Taylor terms are far past double-double epsilon.
  // s = e^r - 1 is carried through the squarings as s(2 + s), which keeps its
  // relative error near epsilon instead of doubling it at every step.
  DoubleDouble term = r;
  DoubleDouble s = r;
  for (int n = 2; n <= 12; ++n) {
    term = term * r / DoubleDouble(static_cast<double>(n));
    s += term;
    if (std::fabs(term.hi) < 1e-36) break;
  }
  for (int i = 0; i < kSquarings; ++i) s = s * (DoubleDouble(2.0) + s);
  const DoubleDouble sum = DoubleDouble(1.0) + s;

  const int ik = static_cast<int>(k);
  return {std::ldexp(sum.hi, ik), std::ldexp(sum.lo, ik)};
}

DoubleDouble log(const DoubleDouble& x) {
  if (x.hi == 1.0 && x.lo == 0.0) return DoubleDouble(0.0);
  const DoubleDouble y(std::log(x.hi));
  // y + x * exp(-y) - 1
  return y + x * exp(-y) - DoubleDouble(1.0);
}

}  // namespace eta_riccati
