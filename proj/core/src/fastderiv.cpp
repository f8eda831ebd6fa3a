#include "eta_riccati/fastderiv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "eta_riccati/double_double.hpp"

namespace eta_riccati {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Unit roundoff of the pair arithmetic, with a little slack for the
// transcendental functions.
constexpr double kEpsDoubleDouble = 4.0 * kEps * kEps;

using PascalRow = std::array<uint128, kBinomialRows>;

const std::array<PascalRow, kBinomialRows>& pascal_triangle() {
  static const auto table = [] {
    std::array<PascalRow, kBinomialRows> rows{};
    for (int n = 0; n < kBinomialRows; ++n) {
      rows[n][0] = 1;
      for (int j = 1; j <= n; ++j) rows[n][j] = rows[n - 1][j - 1] + (j < n ? rows[n - 1][j] : 0);
    }
    return rows;
  }();
  return table;
}

void check_common(double a, double t, int k) {
  if (!(a > 0.0) || !(t > 0.0)) throw DomainError("a and t must be > 0");
  if (k < 0) throw DomainError("derivative order k must be >= 0");
}

// The phi_{a,t,k} sequence evaluated in the requested arithmetic.
template <typename Real>
Real phi_value(double a, double t, int k, int l);

template <>
double phi_value<double>(double a, double t, int k, int l) {
  return basic_discrete(a, t, k, l);
}

template <>
DoubleDouble phi_value<DoubleDouble>(double a, double t, int k, int l) {
  if (l == 0) return DoubleDouble(k == 0 ? 1.0 : 0.0);
  // a*l + 1 exactly as a pair.
  DoubleDouble x = dd_detail::two_prod(a, static_cast<double>(l));
  x += DoubleDouble(1.0);
  const DoubleDouble lg = log(x);
  DoubleDouble r = exp(-(lg * DoubleDouble(t)));
  for (int i = 0; i < k; ++i) r *= lg;
  return r;
}

template <typename Real>
Real binomial_as(int n, int j);

template <>
double binomial_as<double>(int n, int j) {
  return binomial(n, j);
}

template <>
DoubleDouble binomial_as<DoubleDouble>(int n, int j) {
  return DoubleDouble::from_uint128(binomial_exact(n, j));
}

double to_double(double x) { return x; }
double to_double(const DoubleDouble& x) { return static_cast<double>(x); }

double unit_roundoff(Precision p) { return p == Precision::binary64 ? kEps : kEpsDoubleDouble; }

// Triangular tables D[m][l] = Delta^m phi(l) and A[m][l] = sum_j C(m,j)|phi(l+j)|,
// for m + l < count. A bounds the magnitudes that cancel inside D.
template <typename Real>
struct DifferenceTable {
  std::vector<std::vector<Real>> diff;
  std::vector<std::vector<double>> magnitude;
};

template <typename Real>
DifferenceTable<Real> difference_table(double a, double t, int k, int count) {
  DifferenceTable<Real> tab;
  tab.diff.resize(static_cast<std::size_t>(count));
  tab.magnitude.resize(static_cast<std::size_t>(count));
  auto& d0 = tab.diff[0];
  auto& m0 = tab.magnitude[0];
  d0.reserve(static_cast<std::size_t>(count));
  for (int l = 0; l < count; ++l) {
    d0.push_back(phi_value<Real>(a, t, k, l));
    m0.push_back(std::fabs(to_double(d0.back())));
  }
  for (int m = 1; m < count; ++m) {
    const auto& prev = tab.diff[static_cast<std::size_t>(m) - 1];
    const auto& prev_mag = tab.magnitude[static_cast<std::size_t>(m) - 1];
    auto& cur = tab.diff[static_cast<std::size_t>(m)];
    auto& cur_mag = tab.magnitude[static_cast<std::size_t>(m)];
    const int width = count - m;
    cur.reserve(static_cast<std::size_t>(width));
    cur_mag.reserve(static_cast<std::size_t>(width));
    for (int l = 0; l < width; ++l) {
      cur.push_back(prev[static_cast<std::size_t>(l) + 1] - prev[static_cast<std::size_t>(l)]);
      cur_mag.push_back(prev_mag[static_cast<std::size_t>(l) + 1] + prev_mag[static_cast<std::size_t>(l)]);
    }
  }
  return tab;
}

template <typename Real>
CoeffTable coeff_table_impl(double a, double t, int k, int count, Precision precision) {
  const auto tab = difference_table<Real>(a, t, k, count);
  const double u = unit_roundoff(precision);
  CoeffTable out{a, t, k, {}, {}, {}};
  out.coeffs.reserve(static_cast<std::size_t>(count));
  out.bounds.reserve(static_cast<std::size_t>(count));
  out.rounding.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    Real sum(0.0);
    double cond = 0.0;
    for (int l = 0; l <= n; ++l) {
      const auto m = static_cast<std::size_t>(n - l);
      const auto idx = static_cast<std::size_t>(l);
      sum += binomial_as<Real>(n, l) * tab.diff[m][idx];
      cond += binomial(n, l) * tab.magnitude[m][idx];
    }
    const double c = to_double(sum);
    out.coeffs.push_back(((n + k) & 1) != 0 ? -c : c);
    out.bounds.push_back(coeff_bound(a, k, n));
    out.rounding.push_back(cond * u * static_cast<double>(n + 2));
  }
  return out;
}

template <typename Real>
double coeff_explicit(double a, double t, int k, int n, double& cond) {
  std::vector<Real> phi;
  phi.reserve(static_cast<std::size_t>(n) + 1);
  for (int l = 0; l <= n; ++l) phi.push_back(phi_value<Real>(a, t, k, l));

  Real total(0.0);
  cond = 0.0;
  for (int l = 0; l <= n; ++l) {
    const int m = n - l;
    Real delta(0.0);
    double mag = 0.0;
    for (int j = 0; j <= m; ++j) {
      const Real term = binomial_as<Real>(m, j) * phi[static_cast<std::size_t>(l + j)];
      if (((m - j) & 1) != 0) {
        delta -= term;
      } else {
        delta += term;
      }
      mag += binomial(m, j) * std::fabs(to_double(phi[static_cast<std::size_t>(l + j)]));
    }
    total += binomial_as<Real>(n, l) * delta;
    cond += binomial(n, l) * mag;
  }
  const double c = to_double(total);
  return ((n + k) & 1) != 0 ? -c : c;
}

}  // namespace

uint128 binomial_exact(int n, int j) {
  if (n < 0 || n >= kBinomialRows) {
    throw ArgumentError("binomial_exact: n out of table range: " + std::to_string(n));
  }
  if (j < 0 || j > n) return 0;
  return pascal_triangle()[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
}

double binomial(int n, int j) {
  if (j < 0 || j > n || n < 0) return 0.0;
  if (n < kBinomialRows) return static_cast<double>(binomial_exact(n, j));
  j = std::min(j, n - j);
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * static_cast<double>(n - j + i) / static_cast<double>(i);
  return r;
}

int max_terms(Precision precision) noexcept {
  return precision == Precision::binary64 ? kMaxTermsBinary64 : kMaxTermsDoubleDouble;
}

double coeff(double a, double t, int k, int n, const CoeffOptions& opts) {
  check_common(a, t, k);
  if (n < 0) throw DomainError("coeff: n must be >= 0");
  if (n + 1 >= kBinomialRows) throw ArgumentError("coeff: n too large for the binomial table");
  double cond = 0.0;
  const double c = opts.precision == Precision::binary64
                       ? coeff_explicit<double>(a, t, k, n, cond)
                       : coeff_explicit<DoubleDouble>(a, t, k, n, cond);
  const double rounding = cond * unit_roundoff(opts.precision) * static_cast<double>(n + 2);
  const double weighted = rounding * std::pow(3.0, -n);
  if (weighted > opts.tolerance) {
    throw PrecisionError("coeff: cancellation estimate " + std::to_string(weighted) +
                         " exceeds tolerance at n = " + std::to_string(n));
  }
  return c;
}

double coeff_bound(double a, int k, int n) {
  if (!(a > 0.0)) throw DomainError("coeff_bound: a must be > 0");
  if (k < 0 || n < 0) throw DomainError("coeff_bound: k and n must be >= 0");
  if (k == 0) return 2.0;
  const double lg = std::log1p(a * static_cast<double>(std::min(n, k)));
  return 2.0 * binomial(n + k, k) * std::pow(lg, k);
}

CoeffTable build_coeff_table(double a, double t, int k, int count, Precision precision) {
  check_common(a, t, k);
  if (count < 1 || count + k >= kBinomialRows) {
    throw ArgumentError("build_coeff_table: count out of range: " + std::to_string(count));
  }
  return precision == Precision::binary64 ? coeff_table_impl<double>(a, t, k, count, precision)
                                          : coeff_table_impl<DoubleDouble>(a, t, k, count, precision);
}

double truncation_bound(double a, int k, int N) {
  if (!(a > 0.0)) throw DomainError("truncation_bound: a must be > 0");
  if (k < 0 || N < 0) throw DomainError("truncation_bound: k and N must be >= 0");
  const double third = 1.0 / 3.0;
  double tail = 0.0;
  double weight = std::pow(3.0, -N);
  // C(n+k, k) carried by recurrence so the loop is not limited by the table.
  double binom = binomial(N + k, k);
  for (int n = N;; ++n) {
    const double lg = k == 0 ? 1.0 : std::pow(std::log1p(a * static_cast<double>(std::min(n, k))), k);
    const double increment = weight * binom * lg;
    tail += increment;
    // Terms with n < k may vanish (log 1 = 0); only stop once n >= k.
    if (n >= k && increment <= 1e-3 * tail) break;
    if (n > N + 100000) break;
    weight *= third;
    binom = binom * static_cast<double>(n + k + 1) / static_cast<double>(n + 1);
  }
  return (4.0 / 3.0) * tail * 1.002;
}

TruncationReport eta_deriv_fast(const EtaPoint& p, int k, int N, const FastOptions& opts) {
  if (k < 0) throw DomainError("eta_deriv_fast: k must be >= 0");
  const int limit = max_terms(opts.precision);
  if (N < 1 || N > limit) {
    throw ArgumentError("eta_deriv_fast: N must lie in [1, " + std::to_string(limit) + "], got " +
                        std::to_string(N));
  }
  if (N + k >= kBinomialRows) throw ArgumentError("eta_deriv_fast: k too large");

  const CoeffTable table = build_coeff_table(p.a(), p.t(), k, N, opts.precision);
  double sum = 0.0;
  double magnitude = 0.0;
  double rounding = 0.0;
  // Horner from the tail: sum_n c(n) x^n with x = 1/3.
  for (int n = N - 1; n >= 0; --n) {
    sum = sum / 3.0 + table.coeffs[static_cast<std::size_t>(n)];
    magnitude = magnitude / 3.0 + std::fabs(table.coeffs[static_cast<std::size_t>(n)]);
    rounding = rounding / 3.0 + table.rounding[static_cast<std::size_t>(n)];
  }
  TruncationReport report;
  report.value = 2.0 * sum / 3.0;
  report.rounding_estimate = 2.0 * rounding / 3.0 + 2.0 * kEps * N * std::fabs(report.value);
  report.truncation_bound = truncation_bound(p.a(), k, N);
  report.N = N;
  // Measured against the size of the summed terms, so a small value produced
  // by ordinary cancellation between terms is not mistaken for lost precision.
  const double scale = std::max(std::fabs(report.value), 2.0 * magnitude / 3.0);
  if (report.rounding_estimate > opts.relative_rounding_limit * scale) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "eta_deriv_fast: rounding estimate %.3e exceeds %.1e of the term scale %.3e",
                  report.rounding_estimate, opts.relative_rounding_limit, scale);
    throw PrecisionError(buf);
  }
  return report;
}

}  // namespace eta_riccati
