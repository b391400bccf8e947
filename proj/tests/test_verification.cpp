#include <doctest.h>

#include <cmath>

#include "hybrid_stab/controllers.hpp"
#include "hybrid_stab/verification.hpp"
#include "oracle.hpp"

using namespace hybrid_stab;

// Frozen values from tests/oracles/compute_oracles.py.
constexpr double kLieAtProbe = -0.00091364033689554408248;
constexpr double kThetaStar = 0.064816666685348212309;
// Crossing obtained with w = [x1 + theta x2, x2] instead; matches the
// reference threshold 0.0607418.
constexpr double kThetaStarOppositeShear = 0.060741798855020645811;

TEST_CASE("single-point Lie derivative probe") {
  const double lie = lie_derivative_local(0.06, Eigen::Vector2d(0.01, 0.0));
  CHECK(lie < 0.0);
  CHECK(lie == doctest::Approx(kLieAtProbe).epsilon(1e-12));
}

TEST_CASE("analytic Lie derivative agrees with finite differences of V") {
  const double theta = 0.06;
  const LocalController<double> local(theta);
  for (double x1 : {-0.1, -0.02, 0.05, 0.12}) {
    for (double x2 : {-0.3, 0.0, 0.25}) {
      const double u = local(Eigen::Vector2d(x1, x2));
      const double fd = static_cast<double>(oracle::lie_v_ell_fd(theta, x1, x2, u));
      REQUIRE(lie_derivative_local(theta, Eigen::Vector2d(x1, x2)) ==
              doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("hypothesis 1 holds on the certified sublevel set") {
  const auto r = check_h1(0.06, 100000, 7);
  CHECK(r.pass);
  CHECK(r.margin > 0.0);
  CHECK(r.samples > 99000);

  const auto again = check_h1(0.06, 100000, 7);
  CHECK(again.margin == r.margin);
  CHECK(again.samples == r.samples);
}

TEST_CASE("hypothesis 1 on an empty domain") {
  CHECK_THROWS_AS(check_h1(0.06, 1000, 7, 10.0), DegenerateRegion);
  CHECK_THROWS_AS(check_h1(theta1() - 1e-13, 1000, 7), DegenerateRegion);
}

TEST_CASE("hypothesis 2 conditions") {
  const double theta = 0.06;
  const auto r = check_h2(theta, 100000, 7);
  CHECK(r.a.pass);
  CHECK(r.b.pass);
  CHECK(r.c.pass);
  CHECK(r.d.pass);
  CHECK(r.a_max_residual <= 1e-12 * (1.0 + 50.0 * 50.0));

  // c) and d): the derivative and h2 vanish, so the margin is min Psi,
  // approached near x1 = 0 where Psi = theta.
  CHECK(r.c.margin == doctest::Approx(theta).epsilon(1e-3));
  CHECK(r.c.margin >= theta);
  CHECK(r.d.margin == r.c.margin);

  // b) norm bound is attained for x1 >= 0
  CHECK(r.b_norm_margin == 0.0);
  CHECK(r.b_lie_margin > 0.0);
  CHECK(r.b_lie_box_margin == r.b_lie_margin);

  // Conservative oracle: theta (|x| + x^2) dominates sup_u L_h1 V1; the gap
  // 0.132016 x^2 - 0.06 |x| + 0.06214336 has negative discriminant.
  const double qa = (1 - kEpsilon) * kAlphaSlope / 2 - theta;
  const double qc = kEpsilon * kAlphaSlope * kAttractorLevel;
  CHECK(qa == doctest::Approx(0.132016));
  CHECK(qc == doctest::Approx(0.06214336));
  CHECK(theta * theta - 4 * qa * qc < 0.0);
  const double conservative_min = qc - theta * theta / (4 * qa);
  CHECK(r.b_lie_margin >= conservative_min - 1e-12);
}

TEST_CASE("hypothesis 2 reports are reproducible") {
  const auto a = check_h2(0.06, 5000, 3);
  const auto b = check_h2(0.06, 5000, 3);
  CHECK(a.b_lie_margin == b.b_lie_margin);
  CHECK(a.c.margin == b.c.margin);
}

TEST_CASE("hypothesis 3") {
  const auto at = check_h3(0.06);
  CHECK(at.pass);
  CHECK(std::abs(at.max_a - 0.030807) <= 1e-5);
  CHECK(std::abs(at.c_ell - 0.0390824) <= 5e-6);

  CHECK_FALSE(check_h3(0.07).pass);
  CHECK(check_h3(0.001).pass);
  CHECK_THROWS_AS(check_h3(0.13), ThetaOutOfRange);
}

TEST_CASE("inclusion threshold") {
  const double star = find_theta_star(0.05, 0.08, 1e-5);
  CHECK(std::abs(star - kThetaStar) <= 1e-5);
  CHECK(check_h3(star - 1e-5).pass);
  CHECK_FALSE(check_h3(star + 1e-5).pass);

  CHECK(find_theta_star(0.05, 0.08, 1e-12) == doctest::Approx(kThetaStar).epsilon(1e-9));
  // hi beyond theta1 counts as a failing endpoint
  CHECK(find_theta_star(0.05, 0.2, 1e-9) == doctest::Approx(kThetaStar).epsilon(1e-7));

  CHECK_THROWS_AS(find_theta_star(0.05, 0.06, 1e-5), NoBracket);
  CHECK_THROWS_AS(find_theta_star(0.07, 0.08, 1e-5), NoBracket);
  CHECK_THROWS_AS(find_theta_star(0.08, 0.05, 1e-5), NoBracket);
}

TEST_CASE("reference threshold corresponds to the opposite shear sign") {
  // Independent brute-force oracle with w = [x1 + theta x2, x2].
  const auto gap = [](long double t) {
    long double best = -1.0L;
    for (int i = 0; i <= 4000; ++i) {
      const long double x1 = -0.2L + 0.4L * i / 4000;
      const long double x2 = oracle::phi1(t, x1);
      best = std::max(best, oracle::v_ell(-t, x1, x2));
    }
    return static_cast<double>(c_local(static_cast<double>(t))) - static_cast<double>(best);
  };
  long double lo = 0.05L, hi = 0.08L;
  for (int i = 0; i < 60; ++i) {
    const long double mid = (lo + hi) / 2;
    (gap(mid) > 0 ? lo : hi) = mid;
  }
  CHECK(static_cast<double>(lo) == doctest::Approx(kThetaStarOppositeShear).epsilon(1e-8));
  CHECK(std::abs(static_cast<double>(lo) - 0.0607418) <= 1e-7);
}

TEST_CASE("inclusion verdict changes exactly once on the theta grid") {
  int changes = 0;
  bool prev = check_h3(0.001).pass;
  for (int i = 2; i <= 118; ++i) {
    const double theta = 1e-3 * i;
    const bool now = check_h3(theta).pass;
    if (now != prev) {
      ++changes;
      CHECK(theta > kThetaStar);
      CHECK(theta - 1e-3 < kThetaStar);
    }
    prev = now;
  }
  CHECK(changes == 1);
}

TEST_CASE("full report") {
  const auto rep = verify(0.06, 20000, 7);
  CHECK(rep.theta == 0.06);
  CHECK(rep.seed == 7);
  CHECK(rep.h1.pass);
  CHECK(rep.h3.pass);
  CHECK_FALSE(rep.theta_star.has_value());
}
