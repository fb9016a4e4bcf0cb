#include <doctest.h>

#include <random>

#include "isocap/vecineq.hpp"

using namespace isocap;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

// Direct evaluation of the flux pairing in extended precision.
long double flux_pairing(long double p, long double kappa, const VectorXd& x, const VectorXd& y) {
  using V = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const V a = x.cast<long double>(), b = y.cast<long double>();
  const long double e = (p - 2) / 2;
  const auto w = [&](const V& z) {
    const long double s = kappa * kappa + z.squaredNorm();
    return s == 0 ? 0.0L : std::pow(s, e);
  };
  return (w(a) * a - w(b) * b).dot(a - b);
}

VectorXd random_vec(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

}  // namespace

TEST_SUITE("vecineq") {
  TEST_CASE("closed form examples") {
    const Vector2d e1(1.0, 0.0);
    const auto same = monotonicity_gap(3.0, 0.5, e1, e1);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs_core == 0.0);

    const auto opp = monotonicity_gap(3.0, 0.0, e1, Vector2d(-e1));
    CHECK(opp.lhs == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(opp.rhs_core == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-15));

    const auto zero = monotonicity_gap(1.5, 0.0, Vector2d::Zero().eval(), Vector2d(0.0, 2.0));
    CHECK(zero.lhs == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-15));
    CHECK(zero.rhs_core == doctest::Approx(4.0 * std::pow(4.0, -0.25)).epsilon(1e-15));

    CHECK(power_taylor_gap(3.0, e1, Vector2d(2.0, 0.0)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(power_taylor_reference(3.0, e1, Vector2d(2.0, 0.0)) == doctest::Approx(1.0));
    CHECK(power_taylor_gap(1.5, Vector2d::Zero().eval(), Vector2d(0.0, 4.0)) ==
          doctest::Approx(8.0));
    CHECK(power_taylor_reference(1.5, e1, e1) == 0.0);
  }

  TEST_CASE("quadratic exponent identities") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
      const int n = 1 + i % 5;
      const VectorXd x = random_vec(rng, n, 1.0), y = random_vec(rng, n, 1.0);
      const double d2 = (x - y).squaredNorm();
      const auto g = monotonicity_gap(2.0, 0.3, x, y);
      CHECK(g.lhs == doctest::Approx(d2).epsilon(1e-12));
      CHECK(g.rhs_core == doctest::Approx(d2).epsilon(1e-14));
      CHECK(power_taylor_gap(2.0, x, y) == doctest::Approx(d2).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("flux pairing agrees with extended precision evaluation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double p = 1.1 + 2.9 * u(rng);
      const double kappa = (i % 2) ? 0.0 : std::exp(-5.0 + 6.0 * u(rng));
      const int n = 1 + i % 4;
      const VectorXd x = random_vec(rng, n, 1.0);
      const VectorXd y = (i % 3 == 0) ? VectorXd(x + random_vec(rng, n, 1e-3))
                                      : random_vec(rng, n, std::exp(3.0 * u(rng) - 1.5));
      const double got = monotonicity_gap(p, kappa, x, y).lhs;
      const double want = static_cast<double>(flux_pairing(p, kappa, x, y));
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("both sides scale homogeneously") {
    std::mt19937_64 rng(3);
    for (double p : {1.3, 2.0, 2.7}) {
      for (int i = 0; i < 200; ++i) {
        const VectorXd x = random_vec(rng, 3, 1.0), y = random_vec(rng, 3, 1.0);
        const double lambda = 2.0, kappa = 0.4;
        const auto a = monotonicity_gap(p, kappa, x, y);
        const VectorXd lx = lambda * x, ly = lambda * y;
        const auto b = monotonicity_gap(p, lambda * kappa, lx, ly);
        const double s = std::pow(lambda, p);
        CHECK(b.lhs == doctest::Approx(s * a.lhs).epsilon(1e-13));
        CHECK(b.rhs_core == doctest::Approx(s * a.rhs_core).epsilon(1e-13));
        CHECK(power_taylor_gap(p, lx, ly) ==
              doctest::Approx(s * power_taylor_gap(p, x, y)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("both residuals are nonnegative") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(1.05, 4.0);
    for (int i = 0; i < 20000; ++i) {
      const double p = u(rng);
      const VectorXd x = random_vec(rng, 2, 1.0), y = random_vec(rng, 2, 1.0);
      CHECK(monotonicity_gap(p, 0.1 * (i % 3), x, y).lhs >= 0.0);
      CHECK(power_taylor_gap(p, x, y) >= -1e-14);
    }
  }

  TEST_CASE("sample record") {
    VectorXd x(2), y(2);
    x << 1.0, 0.0;
    y << -1.0, 0.0;
    const auto s = make_monotonicity_sample(3.0, 0.0, x, y);
    CHECK(s.p == 3.0);
    CHECK(s.lhs == doctest::Approx(4.0));
    CHECK(s.xi == x);
    CHECK(s.eta_vec == y);
  }

  TEST_CASE("empirical constants") {
    const long long n = 3 * (1 << 15) / 2;
    for (double p : {1.5, 2.0, 3.0}) {
      const auto c = estimate_constants(p, n, 7, 1);
      CHECK(c.samples == n);
      CHECK(c.passed());
      CHECK(c.monotonicity_constant() == doctest::Approx(0.5 * c.monotonicity_min));
      if (p == 2.0) {
        CHECK(c.monotonicity_min == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(c.taylor_min == doctest::Approx(1.0).epsilon(1e-6));
      }
      const auto c2 = estimate_constants(p, n, 7, 2);
      CHECK(c2.monotonicity_min == c.monotonicity_min);
      CHECK(c2.taylor_min == c.taylor_min);
      if (p != 2.0) CHECK(estimate_constants(p, n, 8, 1).monotonicity_min != c.monotonicity_min);
    }
    CHECK_THROWS_AS(estimate_constants(1.0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_constants(2.0, 0, 1), std::invalid_argument);
  }
}
