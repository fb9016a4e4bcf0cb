#include <doctest.h>

#include <json.hpp>

#include "isocap/capacity.hpp"
#include "isocap/functionals.hpp"
#include "isocap/geometry.hpp"
#include "isocap/shapes.hpp"
#include "oracles.hpp"

using namespace isocap;
using oracle::pi;

namespace {

StarDomain wavy(const Params& params, double amp, int k, int m) {
  return StarDomain::from_function(params, AngularGrid::for_dimension(params.dim, m),
                                   [=](double t) { return 1.0 + amp * std::cos(k * t); });
}

void check_history_monotone(const CapacityResult& r) {
  REQUIRE(r.energy_history.size() >= 1);
  for (std::size_t i = 1; i < r.energy_history.size(); ++i)
    CHECK(r.energy_history[i] <= r.energy_history[i - 1] * (1.0 + 1e-14));
}

}  // namespace

TEST_SUITE("capacity") {
  TEST_CASE("closed-form ball capacity") {
    CHECK(ball_capacity(Params(3, 2.0), 1.0) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(ball_capacity(Params(2, 1.5), 1.0) == doctest::Approx(2.0 * pi).epsilon(1e-15));
    for (auto [n, p] : {std::pair{2, 1.5}, {3, 2.0}, {3, 2.5}, {5, 3.7}}) {
      const Params params(n, p);
      CHECK(ball_capacity(params, 2.0) ==
            doctest::Approx(std::pow(2.0, n - p) * ball_capacity(params, 1.0)).epsilon(1e-14));
    }
    // Energy of the radial potential, integrated numerically in s.
    const Params params(3, 2.5);
    const double beta = params.decay_exponent();
    // s = e^y: int_1^inf |u'|^p 4 pi s^2 ds = int_0^inf 4 pi beta^p e^{(3 - (beta + 1) p) y} dy.
    const double e = oracle::simpson(
        [&](double y) { return 4.0 * pi * std::pow(beta, 2.5) * std::exp((3.0 - (beta + 1.0) * 2.5) * y); },
        0.0, 150.0, 200000);
    CHECK(e == doctest::Approx(ball_capacity(params, 1.0)).epsilon(1e-6));
    CHECK_THROWS_AS(ball_capacity(Params(3, 2.0), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Params(3, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(Params(2, 0.9), std::invalid_argument);
  }

  TEST_CASE("radial potential") {
    const Params params(3, 2.0);
    CHECK(radial_potential(params, 1.3, 1.3) == 1.0);
    CHECK(radial_potential(params, 1.0, 2.0) == doctest::Approx(0.5));
    double prev = 1.0;
    for (double s = 1.5; s < 1e6; s *= 3.0) {
      const double v = radial_potential(Params(2, 1.5), 1.0, s);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(prev < 1e-5);
    CHECK_THROWS_AS(radial_potential(params, 1.0, 0.5), std::invalid_argument);
  }

  TEST_CASE("solver is exact on balls") {
    for (auto [n, p] : {std::pair{2, 1.5}, {3, 2.0}, {3, 2.5}}) {
      CAPTURE(n);
      CAPTURE(p);
      const Params params(n, p);
      for (double r : {1.0, 0.8}) {
        const CapacityResult res = solve_capacity(StarDomain::ball(params, r), oracle::coarse(256));
        CHECK(res.value == doctest::Approx(ball_capacity(params, r)).epsilon(1e-10));
        CHECK(res.potential.row(res.potential.rows() - 1).isOnes(0.0));
        CHECK(res.potential.row(0).isZero(0.0));
      }
    }
  }

  TEST_CASE("capacity is monotone under inclusion") {
    const Params params(2, 1.5);
    const auto d = wavy(params, 0.1, 3, 128);
    const CapacityResult r = solve_capacity(d, oracle::coarse(64));
    CHECK(ball_capacity(params, 0.9) <= r.value);
    CHECK(r.value <= ball_capacity(params, 1.1));

    const Params p3(3, 2.5);
    const auto d3 = StarDomain::from_function(p3, AngularGrid::axisymmetric(64),
                                              [](double mu) { return 1.0 + 0.1 * mu * mu * mu; });
    const CapacityResult r3 = solve_capacity(d3, oracle::coarse(64));
    CHECK(ball_capacity(p3, 0.9) <= r3.value);
    CHECK(r3.value <= ball_capacity(p3, 1.1));
  }

  TEST_CASE("prolate spheroid against the Newtonian capacity") {
    const Params params(3, 2.0);
    const double b = std::pow(1.5, -1.0 / 3.0), a = 1.5 * b;
    const auto d = shapes::ellipsoid(params, a, b, 128);
    const CapacityResult r = solve_capacity(d, oracle::coarse(128));
    const double exact = oracle::prolate_newtonian_capacity(a, b);
    CHECK(std::abs(r.value / exact - 1.0) < 5e-3);
    MESSAGE("spheroid relative error " << r.value / exact - 1.0);
  }

  TEST_CASE("perturbed capacity") {
    SUBCASE("kappa = 0 reproduces the capacity") {
      const auto d = wavy(Params(2, 1.5), 0.1, 2, 64);
      const auto cfg = oracle::coarse(32);
      CHECK(perturbed_capacity(d, 0.0, cfg).value == solve_capacity(d, cfg).value);
    }
    SUBCASE("scalar comparison of the integrands") {
      for (double p : {1.3, 1.5, 2.2, 2.5}) {
        for (double k : {1e-3, 0.1, 1.0}) {
          for (double s : {1e-4, 0.3, 1.0, 7.0}) {
            const double reg = std::pow(k * k + s * s, p / 2) - std::pow(k, p);
            if (p >= 2) {
              CHECK(reg >= std::pow(s, p));
            } else {
              CHECK(reg <= std::pow(s, p));
            }
          }
        }
      }
    }
    SUBCASE("ordering induced by the integrand") {
      const auto cfg = oracle::coarse(48);
      const auto d3 = StarDomain::from_function(Params(3, 2.2), AngularGrid::axisymmetric(48),
                                                [](double mu) { return 1.0 + 0.1 * mu * mu; });
      CHECK(perturbed_capacity(d3, 0.1, cfg).value >= solve_capacity(d3, cfg).value);
      const auto d2 = wavy(Params(2, 1.5), 0.15, 2, 64);
      CHECK(perturbed_capacity(d2, 0.1, cfg).value <= solve_capacity(d2, cfg).value);
    }
    SUBCASE("kappa schedule converges to the capacity of the ball") {
      // p = 2: the regularized integrand coincides with |grad u|^2.
      const auto ball2 = StarDomain::ball(Params(3, 2.0), 1.0, 32);
      for (double k : {0.1, 0.01, 0.001})
        CHECK(perturbed_capacity(ball2, k, oracle::coarse(64)).value ==
              doctest::Approx(4.0 * pi).epsilon(1e-12));

      const Params params(3, 2.2);
      const auto ball = StarDomain::ball(params, 1.0, 32);
      const auto cfg = oracle::coarse(64);
      // The far field, where |grad u| < kappa, contributes a gap of order kappa^{0.4}.
      double prev_gap = INFINITY;
      for (double k : {0.1, 0.01, 0.001}) {
        const double gap = perturbed_capacity(ball, k, cfg).value - ball_capacity(params, 1.0);
        CHECK(gap > 0.0);
        CHECK(gap < 0.6 * prev_gap);
        prev_gap = gap;
      }
    }
    SUBCASE("infinite energy is refused") {
      const auto ball = StarDomain::ball(Params(3, 2.5), 1.0, 16);
      CHECK_THROWS_AS(perturbed_capacity(ball, 0.1, oracle::coarse(16)), std::domain_error);
      CHECK_THROWS_AS(perturbed_capacity(ball, -0.1, oracle::coarse(16)), std::invalid_argument);
      CHECK_FALSE(perturbed_energy_finite(Params(3, 2.5)));
      CHECK(perturbed_energy_finite(Params(3, 2.2)));
      CHECK(perturbed_energy_finite(Params(2, 1.9)));
    }
  }

  TEST_CASE("deficit") {
    const Params params(2, 1.5);
    SUBCASE("ball") {
      const DeficitResult d = deficit(StarDomain::ball(params, 1.3, 128), oracle::coarse(64, true));
      CHECK(std::abs(d.value) <= std::max(2.0 * d.error_estimate, 1e-10));
    }
    SUBCASE("ellipse deficit exceeds its error estimate") {
      const auto e = shapes::unit_volume_ellipsoid(params, 1.2, 256);
      const DeficitResult d = deficit(e, oracle::coarse(128, true));
      CHECK(d.value > 5.0 * d.error_estimate);
      CHECK(d.error_estimate > 0.0);
    }
    SUBCASE("scale invariance") {
      const auto e = shapes::unit_volume_ellipsoid(params, 1.2, 128);
      const auto cfg = oracle::coarse(64);
      CHECK(deficit(e.scaled(1.7), cfg).value ==
            doctest::Approx(deficit(e, cfg).value).epsilon(1e-9));
    }
  }

  TEST_CASE("energy decreases and the potential obeys the maximum principle") {
    for (const auto& d : {wavy(Params(2, 1.5), 0.3, 3, 128),
                          shapes::harmonic(Params(3, 2.5), 2, 0.3, 64),
                          shapes::random_band_limited(Params(2, 1.8), 6, 0.3, 5, 128)}) {
      const CapacityResult r = solve_capacity(d, oracle::coarse(64));
      check_history_monotone(r);
      CHECK(r.iterations >= 1);
      CHECK(r.residual <= 1e-7);
      CHECK(r.potential.minCoeff() >= 0.0);
      CHECK(r.potential.maxCoeff() <= 1.0 + 1e-12);
      CHECK(r.value > 0.0);
    }
  }

  TEST_CASE("grid refinement") {
    const Params params(2, 1.5);
    auto value = [&](int n) {
      return solve_capacity(wavy(params, 0.2, 2, 2 * n), oracle::coarse(n)).value;
    };
    const double v32 = value(32), v64 = value(64), v128 = value(128);
    const double d1 = std::abs(v32 - v64), d2 = std::abs(v64 - v128);
    MESSAGE("successive differences " << d1 << " " << d2);
    CHECK(d2 <= 0.5 * d1);

    const CapacityResult r = solve_capacity(wavy(params, 0.2, 2, 128), oracle::coarse(64, true));
    CHECK(r.error_estimate == doctest::Approx(d1).epsilon(1e-9));
  }

  TEST_CASE("rotation invariance") {
    const Params params(2, 1.5);
    const auto d = shapes::random_band_limited(params, 5, 0.25, 11, 128);
    const auto cfg = oracle::coarse(48);
    const double ref = deficit(d, cfg).value;
    Eigen::VectorXd shifted(128);
    for (int j = 0; j < 128; ++j) shifted((j + 37) % 128) = d.rho()(j);
    CHECK(deficit(StarDomain(params, d.grid(), shifted), cfg).value ==
          doctest::Approx(ref).epsilon(1e-11));
    // Rotation by an angle that is not a multiple of the spacing.
    const GridInterpolant f(d.grid(), d.rho());
    const auto turned = StarDomain::from_function(params, d.grid(),
                                                  [&](double t) { return f(t - 0.3); });
    CHECK(deficit(turned, cfg).value == doctest::Approx(ref).epsilon(1e-3));
  }

  TEST_CASE("configuration and failure modes") {
    SolverConfig c;
    c.n_radial = 8;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SolverConfig{};
    c.kappa_schedule = {0.1, 0.2};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.kappa_schedule = {0.1, -0.1};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SolverConfig{};
    c.grad_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    const auto d = wavy(Params(2, 1.5), 0.3, 3, 64);
    SolverConfig tight = oracle::coarse(32);
    tight.max_iters = 1;
    CHECK_THROWS_AS(solve_capacity(d, tight), ConvergenceError);

    // Oscillation near the grid limit is rejected.
    CHECK_THROWS_AS(solve_capacity(wavy(Params(2, 1.5), 0.05, 50, 128), oracle::coarse(32)),
                    std::invalid_argument);
  }

  TEST_CASE("continuation schedule leaves the result unchanged") {
    const auto d = wavy(Params(2, 1.5), 0.2, 2, 64);
    SolverConfig with = oracle::coarse(32);
    with.kappa_schedule = {0.3, 0.1};
    const double a = solve_capacity(d, oracle::coarse(32)).value;
    CHECK(solve_capacity(d, with).value == doctest::Approx(a).epsilon(1e-10));
  }

  TEST_CASE("serialization") {
    const auto d = wavy(Params(2, 1.5), 0.1, 2, 32);
    const CapacityResult r = solve_capacity(d, oracle::coarse(16, true));
    const auto j = nlohmann::json::parse(to_json(r));
    CHECK(j.at("value").get<double>() == r.value);
    CHECK(j.at("error_estimate").get<double>() == r.error_estimate);
    CHECK(j.at("iterations").get<int>() == r.iterations);
    CHECK_FALSE(j.contains("potential"));
    const auto jp = nlohmann::json::parse(to_json(r, true));
    CHECK(jp.at("potential").size() == static_cast<std::size_t>(r.potential.rows()));
  }
}
