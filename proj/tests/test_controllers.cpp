#include <doctest.h>

#include <cmath>
#include <random>

#include "hybrid_stab/controllers.hpp"

using namespace hybrid_stab;

// Frozen values from tests/oracles/compute_oracles.py.
constexpr double kPhiGlobal01 = -52.671103241916099194;
constexpr double kPhiGlobal20 = -315.81049580024147617;
constexpr double kPhiGlobalM1 = 113.88257624569031749;
constexpr double kDelta00 = 0.0450370944;

namespace {

State<double> state(double x1, double x2) {
  State<double> x(2);
  x << x1, x2;
  return x;
}

}  // namespace

TEST_CASE("local controller gains and values") {
  const LocalController<double> k(0.06);
  CHECK(k.k1() == doctest::Approx(7.06));
  CHECK(k.k2() == doctest::Approx(-3.6964));
  CHECK(phi_local(k, Eigen::Vector2d(0, 0)) == 0.0);
  CHECK(phi_local(k, Eigen::Vector2d(1, 1)) == doctest::Approx(-10.7564).epsilon(1e-14));
  CHECK(phi_local(LocalController<double>(0.0), Eigen::Vector2d(1, 0)) == -7.0);
}

TEST_CASE("local closed loop is Hurwitz") {
  for (double theta = 0.0; theta <= 0.06 + 1e-12; theta += 0.005) {
    const LocalController<double> k(theta);
    const auto eig = k.linearization().eigenvalues();
    REQUIRE((eig.real().array() < 0.0).all());
  }
  CHECK_THROWS_AS(LocalController<double>(-0.1), std::invalid_argument);
}

TEST_CASE("phi_local is linear") {
  const LocalController<double> k(0.06);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d x(d(rng), d(rng));
    const double lambda = d(rng);
    REQUIRE(k(Eigen::Vector2d(lambda * x)) == doctest::Approx(lambda * k(x)).epsilon(1e-14));
  }
}

TEST_CASE("phi_sub") {
  CHECK(phi_sub(0.06, 0.0) == 0.0);
  CHECK(phi_sub(0.06, 0.2) == doctest::Approx(-0.55152).epsilon(1e-15));
  CHECK(phi_sub(0.06, -0.2) == doctest::Approx(0.54672).epsilon(1e-15));
}

TEST_CASE("global controller parameters") {
  const GlobalControllerParams<double> p;
  CHECK(p.k_v() == doctest::Approx(0.2004).epsilon(1e-15));
  CHECK(p.k_v() > 0.0);
}

TEST_CASE("phi_global closed form") {
  const GlobalControllerParams<double> p;
  CHECK(phi_global(0.06, p, Eigen::Vector2d(0, 0)) == 0.0);
  CHECK(delta_example(0.06, p, 0.0) == doctest::Approx(kDelta00).epsilon(1e-12));
  CHECK(std::abs(delta_example(0.06, p, 0.0) - 0.045037) <= 1e-6);
  CHECK(phi_global(0.06, p, Eigen::Vector2d(0, 1)) == doctest::Approx(kPhiGlobal01).epsilon(1e-13));
  CHECK(phi_global(0.06, p, Eigen::Vector2d(2, 0)) == doctest::Approx(kPhiGlobal20).epsilon(1e-13));
  CHECK(phi_global(0.06, p, Eigen::Vector2d(-1, 0.5)) == doctest::Approx(kPhiGlobalM1).epsilon(1e-13));
}

TEST_CASE("phi_global is finite on a bounded box") {
  const GlobalControllerParams<double> p;
  for (int i = -50; i <= 50; ++i) {
    for (int j = -50; j <= 50; ++j) {
      REQUIRE(std::isfinite(phi_global(0.06, p, Eigen::Vector2d(0.2 * i, 0.2 * j))));
    }
  }
}

TEST_CASE("generic global controller") {
  const double theta = 0.06;
  const auto plant = ExampleSystem<double>(theta).model();
  const auto bd = example_backstepping_data(theta);
  const GlobalControllerParams<double> p;

  CHECK(phi_global_generic(plant, bd, p, state(0, 0)) == 0.0);

  SUBCASE("quadrature of a constant integrand is exact") {
    // Psi does not depend on x2, so Delta reduces to |x1| Psi + Psi K_V (1 + |dphi1|),
    // which is theta K_V (1 + |x1|)(|x1| / K_V + 1 + |2.7456 + 2 theta x1|).
    // The generic form therefore differs from the closed form only in the
    // d V1 coupling term: x1 / K_V in place of x1 / (2 K_V).
    for (double x1 : {-3.0, -0.5, 0.0, 0.7, 2.0}) {
      for (double x2 : {-1.0, 0.0, 2.5}) {
        const double generic = phi_global_generic(plant, bd, p, state(x1, x2));
        const double closed = phi_global(theta, p, Eigen::Vector2d(x1, x2));
        REQUIRE(generic == doctest::Approx(closed - x1 / (2.0 * p.k_v())).epsilon(1e-12));
      }
    }
  }

  SUBCASE("finite-difference fallback matches the analytic partial") {
    auto fd_plant = plant;
    fd_plant.df1_dx2.reset();
    for (double x1 : {-1.0, 0.3, 1.5}) {
      for (double x2 : {-2.0, 0.4}) {
        REQUIRE(phi_global_generic(fd_plant, bd, p, state(x1, x2)) ==
                doctest::Approx(phi_global_generic(plant, bd, p, state(x1, x2))).epsilon(1e-8));
      }
    }
  }

  SUBCASE("consistency probe against the closed form") {
    double worst = 0.0;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const auto x = state(0.1 * i, 0.1 * j);
        worst = std::max(worst, std::abs(phi_global_generic(plant, bd, p, x) -
                                         phi_global(theta, p, Eigen::Vector2d(x(0), x(1)))));
      }
    }
    MESSAGE("max |generic - closed form| on [-2, 2]^2: " << worst);
  }

  SUBCASE("vanishing f2 is rejected") {
    auto bad = plant;
    bad.f2 = [](const Vector<double>&, double) { return 0.0; };
    CHECK_THROWS_AS(phi_global_generic(bad, bd, p, state(1, 1)), F2Zero);
  }
}

TEST_CASE("hybrid controller decisions") {
  const auto k = HybridController::example(0.06);
  CHECK(k.c_tilde() == doctest::Approx(0.5 * k.c_ell()));

  const auto jump = hybrid_step_logic(k, state(2, 0), Mode::Local);
  REQUIRE(std::holds_alternative<Jump>(jump));
  CHECK(std::get<Jump>(jump).next == Mode::Global);

  const auto flow = hybrid_step_logic(k, state(0, 0), Mode::Local);
  REQUIRE(std::holds_alternative<Flow>(flow));
  CHECK(std::get<Flow>(flow).u == 0.0);

  const auto back = hybrid_step_logic(k, state(0, 0), Mode::Global);
  REQUIRE(std::holds_alternative<Jump>(back));
  CHECK(std::get<Jump>(back).next == Mode::Local);
}

TEST_CASE("flow has priority on the level set") {
  const double theta = 0.06;
  const auto k = HybridController::example(theta);
  // scale a direction onto V = c_ell exactly (up to roundoff)
  const Eigen::Vector2d dir(1.0, 0.3);
  const double s = std::sqrt(k.c_ell() / v_local(theta, dir));
  const State<double> on = s * dir;
  CHECK(std::holds_alternative<Flow>(hybrid_step_logic(k, on, Mode::Local)));
  const State<double> outside = (1.0 + 1e-6) * s * dir;
  CHECK(std::holds_alternative<Jump>(hybrid_step_logic(k, outside, Mode::Local)));
}

TEST_CASE("switch map, set coverage and hysteresis separation") {
  CHECK(switch_mode(switch_mode(Mode::Local)) == Mode::Local);
  CHECK(switch_mode(switch_mode(Mode::Global)) == Mode::Global);
  CHECK(static_cast<int>(switch_mode(Mode::Local)) == 2);
  CHECK(mode_from_int(1) == Mode::Local);
  CHECK_THROWS_AS(mode_from_int(3), std::invalid_argument);

  const auto k = HybridController::example(0.06);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  for (int i = 0; i < 20000; ++i) {
    const auto x = state(d(rng), d(rng));
    for (Mode q : {Mode::Local, Mode::Global}) REQUIRE((k.in_flow_set(q, x) || k.in_jump_set(q, x)));
    const bool j1 = std::holds_alternative<Jump>(hybrid_step_logic(k, x, Mode::Local));
    const bool j2 = std::holds_alternative<Jump>(hybrid_step_logic(k, x, Mode::Global));
    REQUIRE_FALSE((j1 && j2));
  }
}

TEST_CASE("hybrid controller validation") {
  CHECK_THROWS_AS(HybridController::example(0.06, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HybridController::example(0.06, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HybridController::example(0.2), ThetaOutOfRange);
  const auto f = [](const State<double>&) { return 0.0; };
  CHECK_THROWS_AS(HybridController(f, 1.0, 1.0, f, f, f), std::invalid_argument);
  CHECK_THROWS_AS(HybridController(f, 1.0, 0.0, f, f, f), std::invalid_argument);
}
