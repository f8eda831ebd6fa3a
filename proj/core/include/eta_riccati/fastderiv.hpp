#pragma once

// Geometric-rate (ratio 1/3) evaluation of eta_a^{(k)}(t):
//
//   eta_a^{(k)}(t) = (2/3) sum_{n>=0} c_{a,t,k}(n) / 3^n,
//   c_{a,t,k}(n)   = (-1)^{n+k} sum_{l=0}^{n} C(n,l) (Delta^{n-l} phi_{a,t,k})(l),
//
// where phi_{a,t,k}(l) = log^k(a l + 1) / (a l + 1)^t and Delta is the
// forward difference. |c(n)| <= 2 C(n+k,k) log^k(a min(n,k) + 1), which
// gives an explicit bound on the truncation error.

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "eta_riccati/double_double.hpp"
#include "eta_riccati/errors.hpp"
#include "eta_riccati/series.hpp"

namespace eta_riccati {

enum class Precision { binary64, double_double };

inline constexpr int kMaxTermsBinary64 = 40;
inline constexpr int kMaxTermsDoubleDouble = 80;
/// Largest n + k for which exact binomials are tabulated.
inline constexpr int kBinomialRows = 121;

/// Exact C(n, j) from a 128-bit Pascal triangle; n < kBinomialRows.
uint128 binomial_exact(int n, int j);

/// C(n, j) as a double: exact table when n < kBinomialRows, product formula otherwise.
double binomial(int n, int j);

int max_terms(Precision precision) noexcept;

/// Delta^m seq(l) via the binomial expansion sum_j C(m,j) (-1)^{m-j} seq(l+j).
template <typename Seq>
  requires std::invocable<Seq&, std::int64_t>
double forward_difference(Seq&& seq, int m, std::int64_t l) {
  if (m < 0 || l < 0) throw DomainError("forward_difference: m and l must be >= 0");
  double sum = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double term = binomial(m, j) * static_cast<double>(seq(l + j));
    sum += ((m - j) & 1) != 0 ? -term : term;
  }
  return sum;
}

/// Delta^m seq(l) by the recursion Delta^m = Delta(Delta^{m-1}).
template <typename Seq>
  requires std::invocable<Seq&, std::int64_t>
double forward_difference_recursive(Seq&& seq, int m, std::int64_t l) {
  if (m < 0 || l < 0) throw DomainError("forward_difference_recursive: m and l must be >= 0");
  std::vector<double> row(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) row[static_cast<std::size_t>(j)] = static_cast<double>(seq(l + j));
  for (int level = 1; level <= m; ++level) {
    for (int j = 0; j + level <= m; ++j) {
      row[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j) + 1] - row[static_cast<std::size_t>(j)];
    }
  }
  return row.front();
}

struct CoeffOptions {
  Precision precision = Precision::binary64;
  /// Largest rounding error allowed in c(n) / 3^n, the coefficient's
  /// weighted contribution to the geometric series.
  double tolerance = 1e-10;
};

/// c_{a,t,k}(n) straight from the explicit double sum, each Delta evaluated by
/// its binomial expansion. Throws PrecisionError when the cancellation
/// estimate exceeds the tolerance.
double coeff(double a, double t, int k, int n, const CoeffOptions& opts = {});

/// 2 C(n+k, k) log^k(a min(n,k) + 1); equals 2 for k = 0.
double coeff_bound(double a, int k, int n);

struct CoeffTable {
  double a = 0.0;
  double t = 0.0;
  int k = 0;
  std::vector<double> coeffs;
  std::vector<double> bounds;
  /// Rounding estimate for each coefficient, in absolute terms.
  std::vector<double> rounding;
};

/// All c(0..count-1) from one triangular difference table of phi_{a,t,k}.
CoeffTable build_coeff_table(double a, double t, int k, int count,
                             Precision precision = Precision::binary64);

/// (4/3) sum_{n>=N} 3^{-n} C(n+k,k) log^k(a min(n,k)+1), tail summed until
/// the increment drops below 1e-3 of the running tail, then inflated by 0.2%.
double truncation_bound(double a, int k, int N);

struct TruncationReport {
  double value = 0.0;
  double truncation_bound = 0.0;
  int N = 0;
  /// Accumulated floating-point error estimate of the partial sum.
  double rounding_estimate = 0.0;
};

struct FastOptions {
  Precision precision = Precision::binary64;
  /// PrecisionError when rounding_estimate exceeds this fraction of
  /// max(|value|, (2/3) sum |c(n)| / 3^n).
  double relative_rounding_limit = 1e-10;
};

/// (2/3) sum_{n<N} c(n) / 3^n together with its truncation bound.
/// Throws ArgumentError for N outside [1, max_terms(precision)].
TruncationReport eta_deriv_fast(const EtaPoint& p, int k, int N, const FastOptions& opts = {});

}  // namespace eta_riccati
