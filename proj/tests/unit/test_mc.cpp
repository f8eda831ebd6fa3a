#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "eta_riccati/errors.hpp"
#include "eta_riccati/mc.hpp"
#include "support/reference.hpp"

using namespace eta_riccati;

namespace {
constexpr double kLog2 = 0.69314718055994531;

McConfig config(std::int64_t samples, std::uint64_t seed = 20240601) {
  McConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

bool within(const McEstimate& e, double target, double band = 4.0) {
  return std::abs(e.mean - target) <= band * e.std_error;
}
}  // namespace

TEST_CASE("McConfig validation") {
  CHECK_NOTHROW(config(100).validate());
  CHECK_THROWS_AS(config(99).validate(), DomainError);
  CHECK_THROWS_AS(mc_eta(EtaPoint(1, 1), config(10)), DomainError);
}

TEST_CASE("moment accumulator: Welford and Chan merge agree with two-pass formulas") {
  const double xs[] = {1.5, -2.0, 3.25, 0.0, 7.5, 2.0, -1.0, 4.0};
  MomentAccumulator all;
  MomentAccumulator left;
  MomentAccumulator right;
  for (int i = 0; i < 8; ++i) {
    all.add(xs[i]);
    (i < 3 ? left : right).add(xs[i]);
  }
  left.merge(right);
  double mean = 0.0;
  for (double x : xs) mean += x / 8;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  CHECK(all.count() == 8);
  CHECK(all.mean() == doctest::Approx(mean).epsilon(1e-15));
  CHECK(all.variance() == doctest::Approx(ss / 7).epsilon(1e-14));
  CHECK(left.count() == 8);
  CHECK(left.mean() == doctest::Approx(mean).epsilon(1e-15));
  CHECK(left.variance() == doctest::Approx(ss / 7).epsilon(1e-14));
  const auto e = all.estimate();
  CHECK(e.std_error == doctest::Approx(std::sqrt(ss / 7 / 8)).epsilon(1e-14));
  MomentAccumulator empty;
  empty.merge(all);
  CHECK(empty.mean() == all.mean());
}

TEST_CASE("uniform draws lie in the open unit interval") {
  Rng rng = make_stream(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open(rng);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("Gamma sampler moments") {
  const auto cfg = config(1000000);
  for (double shape : {1.0, 2.5}) {
    const auto m = mc_expectation([shape](Rng& r) { return sample_gamma(shape, r); }, cfg);
    CAPTURE(shape);
    CHECK(within(m, shape));
  }
  const auto var = mc_expectation(
      [](Rng& r) {
        const double d = sample_gamma(0.3, r) - 0.3;
        return d * d;
      },
      cfg);
  CHECK(within(var, 0.3, 5.0));
  Rng rng = make_stream(3, 0);
  for (int i = 0; i < 10000; ++i) REQUIRE(sample_gamma(0.05, rng) >= 0.0);
  CHECK_THROWS_AS(sample_gamma(0.0, rng), DomainError);
}

TEST_CASE("S_k variables") {
  Rng rng = make_stream(5, 0);
  for (int i = 0; i < 1000; ++i) REQUIRE(sample_sk(0, rng) == 0.0);
  CHECK_THROWS_AS(sample_sk(-1, rng), DomainError);
  const auto cfg = config(1000000);
  CHECK(within(mc_sk_laplace(1, 1.0, cfg), kLog2));
  CHECK(within(mc_sk_laplace(2, 1.0, cfg), kLog2 * kLog2));
  for (int k : {1, 2, 3}) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      CAPTURE(k);
      CAPTURE(lambda);
      CHECK(within(mc_sk_laplace(k, lambda, cfg), sk_laplace_exact(k, lambda)));
    }
  }
  CHECK(sk_laplace_exact(3, 0.0) == 1.0);
  CHECK(sk_laplace_exact(2, 1.0) == doctest::Approx(kLog2 * kLog2).epsilon(1e-15));
}

TEST_CASE("Gamma expectation of the logistic function") {
  const auto cfg = config(1000000);
  CHECK(within(mc_eta(EtaPoint(1, 1), cfg), kLog2));
  CHECK(within(mc_eta(EtaPoint(2, 2), cfg), oracle::reference(2, 2, 0)));
  CHECK(within(mc_eta(EtaPoint(1, 0.5), cfg), oracle::reference(1, 0.5, 0)));
}

TEST_CASE("stochastic derivative formula") {
  const auto cfg = config(1000000);
  CHECK(within(mc_eta_deriv(EtaPoint(1, 1), 1, cfg), oracle::reference(1, 1, 1)));
  const auto d2 = mc_eta_deriv(EtaPoint(2, 2), 2, cfg);
  CHECK(d2.mean < 0.0);
  CHECK(within(d2, oracle::reference(2, 2, 2)));
  const auto d0 = mc_eta_deriv(EtaPoint(1, 1), 0, cfg);
  const auto e = mc_eta(EtaPoint(1, 1), cfg);
  CHECK(d0.mean == e.mean);
  CHECK(d0.std_error == e.std_error);
  CHECK_THROWS_AS(mc_eta_deriv(EtaPoint(1, 1), 3, cfg), ArgumentError);
}

TEST_CASE("every logistic draw lies strictly between 1/2 and 1") {
  Rng rng = make_stream(11, 0);
  for (double t : {0.3, 1.0, 4.0}) {
    for (int i = 0; i < 100000; ++i) {
      const double x = sample_gamma(t, rng);
      const double f = logistic(1.0, x, 0);
      REQUIRE(f >= 0.5);
      REQUIRE(f <= 1.0);
      // f - 1/2 is about x / 4; below ~1e-15 it rounds to exactly 1/2 in binary64.
      if (x > 1e-14 && x < 30.0) {
        REQUIRE(f > 0.5);
        REQUIRE(f < 1.0);
      }
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto cfg = config(200000, 99);
  setenv("ETA_RICCATI_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto one = mc_eta(EtaPoint(1, 1), cfg);
  setenv("ETA_RICCATI_THREADS", "4", 1);
  CHECK(worker_count() <= 4);
  const auto many = mc_eta(EtaPoint(1, 1), cfg);
  unsetenv("ETA_RICCATI_THREADS");
  CHECK(one.mean == many.mean);
  CHECK(one.std_error == many.std_error);
  CHECK(one.samples == 200000);
  const auto again = mc_eta(EtaPoint(1, 1), cfg);
  CHECK(again.mean == one.mean);
  const auto other = mc_eta(EtaPoint(1, 1), config(200000, 100));
  CHECK(other.mean != one.mean);
}

TEST_CASE("sample counts not divisible by the stream count") {
  auto cfg = config(1001);
  cfg.streams = 64;
  CHECK(mc_eta(EtaPoint(1, 1), cfg).samples == 1001);
  cfg.samples = 100;
  CHECK(mc_eta(EtaPoint(1, 1), cfg).samples == 100);
}

TEST_CASE("coverage of the 2-stderr interval") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto e = mc_eta(EtaPoint(1, 1), config(20000, 1000 + seed));
    hits += std::abs(e.mean - kLog2) <= 2.0 * e.std_error ? 1 : 0;
  }
  const double fraction = hits / 200.0;
  CAPTURE(fraction);
  CHECK(fraction >= 0.90);
  CHECK(fraction <= 0.99);
}
