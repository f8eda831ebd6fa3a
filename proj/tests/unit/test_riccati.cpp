#include <doctest.h>

#include <cmath>
#include <vector>

#include "eta_riccati/errors.hpp"
#include "eta_riccati/riccati.hpp"
#include "support/reference.hpp"

using namespace eta_riccati;

namespace {
const std::vector<double> kA{1.0, 2.0, 10.0, 11.0};
const std::vector<double> kT{0.5, 1.0, 2.0, 4.0, 30.0};

double round4(double x) { return std::round(x * 1e4) / 1e4; }
}  // namespace

TEST_CASE("riccati_fields against the frozen references") {
  for (const auto& r : oracle::kReference) {
    if (r.k != 0 || r.a == 0.5) continue;
    const auto s = riccati_fields(EtaPoint(r.a, r.t));
    const double phi = oracle::phi(r.a, r.t);
    const double q = oracle::q(r.a, r.t);
    CAPTURE(r.a);
    CAPTURE(r.t);
    CHECK(s.converged);
    CHECK(s.phi == doctest::Approx(phi).epsilon(1e-10));
    CHECK(s.q == doctest::Approx(q).epsilon(1e-10));
    CHECK(s.phi_e == doctest::Approx(-q / 2).epsilon(1e-10));
    CHECK(s.ratio == doctest::Approx(-2.0 * phi / q).epsilon(1e-10));
    CHECK(s.phi_as == doctest::Approx(std::log1p(r.a) * std::pow(r.a + 1, -r.t)).epsilon(1e-14));
    CHECK(s.eta == doctest::Approx(r.value).epsilon(1e-13));
  }
}

TEST_CASE("riccati_fields at rows whose printed values are unaffected by truncation") {
  const auto s24 = riccati_fields(EtaPoint(2, 4));
  CHECK(round4(s24.phi) == 0.0117);
  CHECK(round4(s24.phi_e) == 0.0060);
  CHECK(round4(s24.ratio) == 1.9533);
  const auto s11 = riccati_fields(EtaPoint(1, 1));
  CHECK(round4(s11.phi_as) == 0.3466);
  const auto s10 = riccati_fields(EtaPoint(10, 1));
  CHECK(round4(s10.phi) == 0.1434);
  CHECK(round4(s10.phi_e) == 0.1515);
}

TEST_CASE("the 10^5-summand configuration reproduces the reference rounding") {
  // Plain partial sums over 10^5 terms shift phi_e at t = 1 by a few 1e-4.
  const auto ref = EvalOptions::reference();
  const auto s11 = riccati_fields(EtaPoint(1, 1), ref);
  CHECK(round4(s11.phi) == 0.2307);
  CHECK(round4(s11.phi_e) == 0.0476);
  CHECK(round4(s11.ratio) == 4.8437);
  CHECK_FALSE(s11.converged);
  const auto exact = riccati_fields(EtaPoint(1, 1));
  CHECK(round4(exact.phi) == 0.2306);
  CHECK(round4(exact.phi_e) == 0.0472);
  CHECK(round4(exact.ratio) == 4.8910);
  const auto s10 = riccati_fields(EtaPoint(10, 1), ref);
  CHECK(round4(s10.ratio) == 0.9466);
}

TEST_CASE("direct method reports non-convergence instead of failing") {
  EvalOptions o;
  o.method = Method::direct;
  const auto s = riccati_fields(EtaPoint(1, 0.5), o);
  CHECK_FALSE(s.converged);
  CHECK(s.max_error > 1e-3);
  CHECK_THROWS_AS(riccati_residual(EtaPoint(1, 0.5), 1e-4, o), ConvergenceError);
}

TEST_CASE("riccati residual") {
  CHECK(riccati_residual(EtaPoint(1, 2), 1e-4) < 1e-7);
  CHECK(riccati_residual(EtaPoint(2, 1), 1e-4) < 1e-7);
  const double coarse = riccati_residual(EtaPoint(1, 2), 1e-3);
  const double fine = riccati_residual(EtaPoint(1, 2), 1e-4);
  CHECK(coarse / fine > 50.0);
  CHECK(coarse / fine < 200.0);
  for (double a : {1.0, 2.0, 10.0}) {
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      CAPTURE(a);
      CAPTURE(t);
      CHECK(riccati_residual(EtaPoint(a, t), 1e-4) < 1e-6);
    }
  }
  CHECK_THROWS_AS(riccati_residual(EtaPoint(1, 0.5), 0.5), DomainError);
  CHECK_THROWS_AS(riccati_residual(EtaPoint(1, 0.5), 0.0), DomainError);
}

TEST_CASE("asymptotic ratio limit") {
  CHECK(asymptotic_ratio_limit(1) == doctest::Approx(2.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(round4(asymptotic_ratio_limit(1)) == 2.8854);
  CHECK(round4(asymptotic_ratio_limit(2)) == 1.8205);
  CHECK(round4(asymptotic_ratio_limit(10)) == 0.8341);
  CHECK(round4(asymptotic_ratio_limit(11)) == 0.8049);
  CHECK_THROWS_AS(asymptotic_ratio_limit(0), DomainError);
  CHECK(asymptotic_manifold(1, 1) == doctest::Approx(std::log(2.0) / 2).epsilon(1e-15));
}

TEST_CASE("sign structure, monotonicity and the Riccati inequality") {
  for (double a : kA) {
    double prev_phi = INFINITY;
    for (double t : kT) {
      const auto s = riccati_fields(EtaPoint(a, t));
      CAPTURE(a);
      CAPTURE(t);
      CHECK(s.phi > 0.0);
      CHECK(s.q < 0.0);
      CHECK(s.phi_e > 0.0);
      CHECK(s.phi < prev_phi);
      prev_phi = s.phi;
      if (t < 30.0) {
        const double h = 1e-4;
        const double dphi = (riccati_fields(EtaPoint(a, t + h)).phi - riccati_fields(EtaPoint(a, t - h)).phi) / (2 * h);
        CHECK(dphi < -s.phi * s.phi);
      }
    }
  }
}

TEST_CASE("trapping inequalities in both regimes") {
  for (double a : {1.0, 2.0}) {
    for (double t : kT) {
      const auto s = riccati_fields(EtaPoint(a, t));
      CAPTURE(a);
      CAPTURE(t);
      CHECK(s.phi_e > 0.0);
      CHECK(s.phi_e < s.phi);
    }
  }
  for (double a : {10.0, 11.0}) {
    for (double t : {1.0, 2.0, 4.0, 30.0}) {
      const auto s = riccati_fields(EtaPoint(a, t));
      CAPTURE(a);
      CAPTURE(t);
      CHECK(s.phi > 0.0);
      CHECK(s.phi < s.phi_e);
    }
  }
}

TEST_CASE("ratio at t = 30 approaches 2 / log(a+1)") {
  for (double a : kA) {
    CAPTURE(a);
    CHECK(std::abs(riccati_fields(EtaPoint(a, 30)).ratio - asymptotic_ratio_limit(a)) < 5e-4);
  }
}

TEST_CASE("phi tracks the asymptotic manifold at rate (2a+1)^{-t}") {
  for (double a : {1.0, 2.0}) {
    double lo = INFINITY;
    double hi = 0.0;
    for (double t = 4.0; t <= 20.0 + 1e-9; t += 0.5) {
      const auto s = riccati_fields(EtaPoint(a, t));
      const double scaled = std::abs(s.phi - s.phi_as) / std::pow(2 * a + 1, -t);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    CAPTURE(a);
    CAPTURE(lo);
    CAPTURE(hi);
    CHECK(hi < 10.0);
    CHECK(hi / lo < 10.0);
  }
}

TEST_CASE("thresholds for large a") {
  const auto r10 = trapping_threshold(10);
  CHECK(r10.t_star == doctest::Approx(0.47765795812619949).epsilon(1e-9));
  CHECK(std::abs(r10.residual) <= 1e-10);
  CHECK(r10.bracket_lo <= r10.t_star);
  CHECK(r10.t_star <= r10.bracket_hi);
  CHECK(r10.iterations > 0);
  CHECK(curvature(EtaPoint(10, r10.bracket_lo)).value * curvature(EtaPoint(10, r10.bracket_hi)).value < 0.0);

  const auto r11 = trapping_threshold(11);
  CHECK(r11.t_star == doctest::Approx(0.18279000388745947).epsilon(1e-9));
  CHECK(std::abs(r11.residual) <= 1e-10);
}

TEST_CASE("no crossing for small a with exact evaluation") {
  // eta'' + 2 eta' stays positive on the whole window for a = 1 and a = 2.
  CHECK_THROWS_AS(trapping_threshold(1), NoCrossingError);
  CHECK_THROWS_AS(trapping_threshold(2), NoCrossingError);
  CHECK(oracle::curvature(1, 0.5) > 0.3);
  CHECK(oracle::curvature(2, 0.5) > 0.3);
}

TEST_CASE("truncated sums produce spurious thresholds for small a") {
  ThresholdOptions o;
  o.eval = EvalOptions::reference();
  CHECK_THROWS_AS(trapping_threshold(1, o), ConvergenceError);
  o.certify = false;
  CHECK(trapping_threshold(1, o).t_star == doctest::Approx(0.4448).epsilon(2e-3));
  CHECK(trapping_threshold(2, o).t_star == doctest::Approx(0.4156).epsilon(2e-3));
}

TEST_CASE("threshold argument checks") {
  CHECK_THROWS_AS(trapping_threshold(0), DomainError);
  CHECK_THROWS_AS(trapping_threshold(std::expm1(2.0)), NoCrossingError);
  ThresholdOptions bad;
  bad.window_hi = bad.window_lo;
  CHECK_THROWS_AS(trapping_threshold(10, bad), DomainError);
}

TEST_CASE("curvature values") {
  CHECK(curvature(EtaPoint(1, 1)).value > 0.0);
  CHECK(curvature(EtaPoint(1, 1)).value == doctest::Approx(oracle::curvature(1, 1)).epsilon(1e-12));
  // At the truncated-sum T*(1) = 0.4448 the exact curvature is far from zero.
  CHECK(curvature(EtaPoint(1, 0.4448)).value == doctest::Approx(0.32693340691504201).epsilon(1e-10));
  CHECK(curvature(EtaPoint(2, 0.4156)).value == doctest::Approx(0.39000135697455016).epsilon(1e-10));
}

TEST_CASE("curvature series: leading term and degenerate weight") {
  const double L = std::log(2.0);
  // Two summands: m = 0 carries weight L_0 (L_0 - 2) = 0, so only m = 1 contributes.
  const auto one = curvature_series(EtaPoint(1, 3), SeriesAccuracy{2, 1e-15});
  CHECK(one.terms_used == 2);
  CHECK(one.value == doctest::Approx(L * (2 - L) / 8).epsilon(1e-15));
  CHECK(one.value == doctest::Approx(0.11323).epsilon(1e-4));
  const auto crit = curvature_series(EtaPoint(std::expm1(2.0), 2), SeriesAccuracy{2, 1e-15});
  CHECK(std::abs(crit.value) < 1e-15);
}

TEST_CASE("two-path curvature equality") {
  for (double a : {1.0, 2.0, 10.0}) {
    for (double t : {2.0, 4.0, 8.0}) {
      const EtaPoint p(a, t);
      const auto series = curvature_series(p, SeriesAccuracy{t < 3.0 ? 30000000 : 100000, 1e-15});
      CAPTURE(a);
      CAPTURE(t);
      CHECK(series.error_estimate <= 5e-13);
      CHECK(std::abs(curvature(p).value - series.value) <= 1e-12);
    }
  }
}

TEST_CASE("rescaled derivative is increasing") {
  for (double a : {1.0, 2.0}) {
    double prev = -INFINITY;
    for (int i = 0; i <= 75; ++i) {
      const double t = 0.5 + 0.1 * i;
      const double v = rescaled_derivative(EtaPoint(a, t));
      CAPTURE(a);
      CAPTURE(t);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("higher-order quotients") {
  const auto q2 = higher_quotient(EtaPoint(1, 30), 2);
  const double exact = oracle::reference(1, 30, 2) / oracle::reference(1, 30, 1);
  CHECK(q2.k == 2);
  CHECK(q2.phi_k == doctest::Approx(exact).epsilon(1e-9));
  // The next term in the expansion is O((3/2)^{-30}) relative, about 3e-6 here.
  CHECK(std::abs(q2.phi_k + std::log(2.0)) < 1e-5);
  CHECK(std::abs(q2.ratio_k - 2.8854) < 1e-3);
  // At t = 30, |eta''| for a = 2 is about 6e-15, below the 1e-12 guard, so the
  // order-independence of the limit is checked at t = 20 instead.
  CHECK_THROWS_AS(higher_quotient(EtaPoint(2, 30), 3), DomainError);
  const auto q3 = higher_quotient(EtaPoint(2, 20), 3);
  CHECK(std::abs(q3.ratio_k - 1.8205) < 1e-3);
  CHECK(std::abs(higher_quotient(EtaPoint(2, 20), 2).ratio_k - 1.8205) < 1e-3);
  const auto q1 = higher_quotient(EtaPoint(1, 1), 1);
  const auto s = riccati_fields(EtaPoint(1, 1));
  CHECK(q1.phi_k == doctest::Approx(s.phi).epsilon(1e-14));
  CHECK(q1.phi_ek == doctest::Approx(s.phi_e).epsilon(1e-14));
  CHECK_THROWS_AS(higher_quotient(EtaPoint(1, 1), 0), DomainError);
  // eta'(45) is about 2e-14: the guard refuses to divide by it.
  CHECK_THROWS_AS(higher_quotient(EtaPoint(1, 45), 2), DomainError);
}

TEST_CASE("perturbation factor") {
  CHECK(perturbation_factor(1, 2, 2) == 1.0);
  const double f = perturbation_factor(2, 1, 2);
  CHECK(f > 0.0);
  CHECK(f < 1.0);
  CHECK(f == doctest::Approx(0.87730737172360452).epsilon(1e-9));
  CHECK(perturbation_factor(1, 1, 30) == doctest::Approx(0.82840362535656952).epsilon(1e-9));
  CHECK_THROWS_AS(perturbation_factor(1, 2, 1), DomainError);
}

TEST_CASE("perturbation factor: quadrature against the Riccati identity") {
  // int q = phi(t1) - phi(t0) + int phi^2, with the last integral on a fixed Simpson grid.
  const double a = 1.0;
  const double t0 = 1.0;
  const double t1 = 30.0;
  const int n = 2900;
  const double h = (t1 - t0) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double phi = riccati_fields(EtaPoint(a, t0 + i * h)).phi;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * phi * phi;
  }
  const double integral =
      riccati_fields(EtaPoint(a, t1)).phi - riccati_fields(EtaPoint(a, t0)).phi + acc * h / 3.0;
  CHECK(perturbation_factor(a, t0, t1) == doctest::Approx(std::exp(integral)).epsilon(1e-9));
}

TEST_CASE("perturbation factor follows its leading asymptotics for large t0") {
  for (double a : {1.0, 2.0}) {
    const double t0 = 8.0;
    const double log_factor = std::log(perturbation_factor(a, t0, 40.0));
    const double leading = -asymptotic_manifold(a, t0);
    CAPTURE(a);
    CHECK(std::abs(log_factor / leading - 1.0) < 0.06);
  }
}
