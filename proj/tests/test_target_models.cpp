#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hmckit/errors.hpp"
#include "hmckit/rng.hpp"
#include "hmckit/target_model.hpp"
#include "test_support.hpp"

using namespace hmckit;

TEST_CASE("gamma51 potential and gradient") {
  const TargetModel m = make_gamma51();
  CHECK(m.dim == 1);
  CHECK(m.potential({1.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.potential({4.0}) ==
        doctest::Approx(-1.5451774444795623).epsilon(1e-15));
  CHECK(std::abs(m.gradient({4.0})[0]) < 1e-15);
  CHECK(m.gradient({1.0})[0] == doctest::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("gamma51 support boundary") {
  const TargetModel m = make_gamma51();
  CHECK(m.in_support({0.5}));
  CHECK(!m.in_support({0.0}));
  CHECK(!m.in_support({-1.0}));
  CHECK_THROWS_AS(m.potential({0.0}), OutOfSupportError);
  CHECK_THROWS_AS(m.gradient({-2.0}), OutOfSupportError);
}

TEST_CASE("binormal frozen values") {
  const TargetModel m = make_binormal();
  CHECK(m.dim == 2);
  // Sigma^{-1} has entries 1/0.2775 and 0.85/0.2775, so the quadratic form
  // at (1,1) is 20/3 and at (1,-1) it is 20/37 after the half.
  CHECK(m.potential({1.0, 1.0}) == doctest::Approx(20.0 / 3.0).epsilon(1e-13));
  CHECK(m.potential({1.0, -1.0}) ==
        doctest::Approx(20.0 / 37.0).epsilon(1e-13));
  const Vec g = m.gradient({1.0, 1.0});
  CHECK(g[0] == doctest::Approx(20.0 / 3.0).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(20.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("binormal potential is even") {
  const TargetModel m = make_binormal();
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Vec q{4.0 * rng.normal(), 4.0 * rng.normal()};
    const Vec neg{-q[0], -q[1]};
    CHECK(m.potential(q) == m.potential(neg));
  }
}

TEST_CASE("mixture frozen values") {
  const TargetModel m = make_mixture();
  CHECK(m.dim == 2);
  CHECK(m.potential({-4.0, -4.0}) ==
        doctest::Approx(2.61032676205761).epsilon(1e-12));
  CHECK(m.potential({5.0, 5.0}) ==
        doctest::Approx(2.3015473504397153).epsilon(1e-12));
  CHECK(m.potential({0.0, 0.0}) ==
        doctest::Approx(13.276993428706245).epsilon(1e-12));
}

TEST_CASE("mixture log-sum-exp matches the direct density") {
  const TargetModel m = make_mixture();

  // Direct two-component density without the log-sum-exp rearrangement.
  // Valid only where neither exponent underflows, hence the guard below.
  const auto direct = [](const Vec& q) {
    const double d1x = q[0] + 4.0, d1y = q[1] + 4.0;
    const double q1 = (d1x * d1x - 2.0 * 0.5 * d1x * d1y + d1y * d1y) / 0.75;
    const double f1 = std::exp(-0.5 * q1) / (2.0 * std::numbers::pi * std::sqrt(0.75));
    const double d2x = q[0] - 5.0, d2y = q[1] - 5.0;
    const double q2 = (d2x * d2x + 2.0 * 0.3 * d2x * d2y + d2y * d2y) / 0.91;
    const double f2 = std::exp(-0.5 * q2) / (2.0 * std::numbers::pi * std::sqrt(0.91));
    return -std::log(0.4 * f1 + 0.6 * f2);
  };

  Rng rng(11);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    const Vec q{-8.0 + 17.0 * rng.uniform(), -8.0 + 17.0 * rng.uniform()};
    const double u = m.potential(q);
    if (u > 600.0) continue;  // direct form would underflow
    CHECK(u == doctest::Approx(direct(q)).epsilon(1e-12));
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("mixture stays finite far from both modes") {
  const TargetModel m = make_mixture();
  CHECK(std::isfinite(m.potential({80.0, -80.0})));
  CHECK(std::isfinite(m.potential({-200.0, -200.0})));
  const Vec g = m.gradient({80.0, -80.0});
  CHECK(std::isfinite(g[0]));
  CHECK(std::isfinite(g[1]));
}

TEST_CASE("eight schools frozen values") {
  const TargetModel m = make_eight_schools();
  CHECK(m.dim == 10);
  const Vec zero(10, 0.0);
  CHECK(m.potential(zero) ==
        doctest::Approx(19.169756944444444).epsilon(1e-14));
  CHECK(m.gradient(zero)[8] ==
        doctest::Approx(-23.62847222222222).epsilon(1e-14));
}

TEST_CASE("eight schools prior terms") {
  const TargetModel m = make_eight_schools();
  const double u0 = m.potential(Vec(10, 0.0));

  // With every eta zero the misfit is unchanged by tau, so moving tau to 5
  // adds only its standard-normal prior: 25/2.
  Vec tau5(10, 0.0);
  tau5[9] = 5.0;
  CHECK(m.potential(tau5) - u0 == doctest::Approx(12.5).epsilon(1e-12));

  // With tau zero, one unit of eta_1 moves only its N(0,1) prior.
  Vec eta1(10, 0.0);
  eta1[0] = 1.0;
  CHECK(m.potential(eta1) - u0 == doctest::Approx(0.5).epsilon(1e-12));

  // Moving mu changes both its prior and every misfit term. The shift at
  // mu = 1 is 1/2 + sum((y_i - 1)^2 - y_i^2) / (2 kappa_i^2), frozen here
  // from direct summation over the observation table.
  Vec mu1(10, 0.0);
  mu1[8] = 1.0;
  CHECK(m.potential(mu1) - u0 ==
        doctest::Approx(-9.6631944444444429).epsilon(1e-13));
}

TEST_CASE("eight schools sign-flip invariance in (tau, eta)") {
  const TargetModel m = make_eight_schools();
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    Vec q(10);
    for (double& v : q) v = 2.0 * rng.normal();
    Vec flipped = q;
    for (int j = 0; j < 8; ++j) flipped[j] = -flipped[j];
    flipped[9] = -flipped[9];
    CHECK(m.potential(q) == m.potential(flipped));
  }
}

TEST_CASE("std gaussian reference target") {
  const TargetModel m = make_std_gaussian(3);
  CHECK(m.dim == 3);
  CHECK(m.potential({1.0, 2.0, 2.0}) == doctest::Approx(4.5).epsilon(1e-15));
  const Vec g = m.gradient({1.0, -2.0, 0.5});
  CHECK(g[0] == 1.0);
  CHECK(g[1] == -2.0);
  CHECK(g[2] == 0.5);
  CHECK(m.in_support({1e300, -1e300, 0.0}));
}

TEST_CASE("dimension mismatch is rejected") {
  const TargetModel m = make_binormal();
  CHECK_THROWS_AS(m.potential({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(m.gradient({1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("find_model resolves the builtin names") {
  for (const std::string& name : builtin_model_names()) {
    const auto m = find_model(name);
    REQUIRE(m.has_value());
    CHECK(m->name == name);
    CHECK(m->dim >= 1);
  }
  CHECK(builtin_model_names().size() == 4);
  CHECK(!find_model("gama").has_value());
  CHECK(!find_model("").has_value());
}

TEST_CASE("check_gradient agrees with finite differences") {
  // Interior points for every model; the acceptance suite sweeps whole
  // boxes, this pins a couple of spots cheaply.
  CHECK(check_gradient(make_gamma51(), {4.0}, 1e-5) < 1e-6);
  CHECK(check_gradient(make_binormal(), {1.0, 1.0}, 1e-5) < 1e-6);
  CHECK(check_gradient(make_mixture(), {0.5, -0.5}, 1e-5) < 1e-6);
  CHECK(check_gradient(make_eight_schools(), Vec(10, 0.3), 1e-5) < 1e-6);
}

TEST_CASE("check_gradient reports perturbations that leave the support") {
  const TargetModel m = make_gamma51();
  CHECK_THROWS_AS(check_gradient(m, {1e-6}, 1e-5), OutOfSupportError);
}
