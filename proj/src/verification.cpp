#include "hybrid_stab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hybrid_stab/controllers.hpp"
#include "hybrid_stab/numerics.hpp"

namespace hybrid_stab {

namespace {

constexpr double kBox = 50.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool h3_holds(double theta) {
  if (!(theta < theta1())) return false;
  return check_h3(theta).pass;
}

}  // namespace

double lie_derivative_local(double theta, const Eigen::Vector2d& x) {
  const auto plant = ExampleSystem<double>(theta).model();
  const LocalController<double> local(theta);
  const Eigen::VectorXd dx = flow_field(plant, Eigen::VectorXd(x), local(x));
  return v_local_gradient(theta, x).dot(dx);
}

H1Result check_h1(double theta, std::uint64_t samples, std::uint64_t seed,
                  double exclusion_radius) {
  const double c = c_local(theta);
  const Eigen::Matrix2d form = local_form(theta);
  // Largest |x| on {V <= c} is sqrt(c / lambda_min(T^T P T)).
  const double lambda_min = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(form).eigenvalues()(0);
  if (std::sqrt(c / lambda_min) <= exclusion_radius) {
    throw DegenerateRegion("sublevel set lies inside the excluded ball around the origin");
  }

  // V = |L^T w|^2 with P = L L^T, and x = T^{-1} w.
  const Eigen::Matrix2d l_t = local_lyapunov_matrix().llt().matrixU();
  const Eigen::Matrix2d t_inv = local_coordinates(theta).inverse();
  const numerics::Halton halton(2, seed);

  H1Result r;
  r.margin = kInf;
  for (std::uint64_t i = 1; i <= samples; ++i) {
    const double rho = std::sqrt(halton(i, 0) * c);
    const double ang = 2.0 * std::numbers::pi * halton(i, 1);
    const Eigen::Vector2d z(rho * std::cos(ang), rho * std::sin(ang));
    const Eigen::Vector2d x = t_inv * l_t.triangularView<Eigen::Upper>().solve(z);
    if (x.norm() < exclusion_radius || !(v_local(theta, x) < c)) continue;
    r.margin = std::min(r.margin, -lie_derivative_local(theta, x));
    ++r.samples;
  }
  if (r.samples == 0) throw DegenerateRegion("no admissible samples in the sublevel set");
  r.pass = r.margin > 0.0;
  return r;
}

H2Result check_h2(double theta, std::uint64_t samples, std::uint64_t seed) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const auto plant = ExampleSystem<double>(theta).model();
  const auto bd = example_backstepping_data(theta);
  const numerics::Halton halton(2, seed);

  H2Result r;
  r.a.margin = r.b_norm_margin = r.b_lie_margin = r.b_lie_box_margin = kInf;
  r.c.margin = r.d.margin = kInf;
  for (std::uint64_t i = 1; i <= samples; ++i) {
    const double x1 = kBox * (2.0 * halton(i, 0) - 1.0);
    const double x2 = kBox * (2.0 * halton(i, 1) - 1.0);
    const Eigen::VectorXd x1v = Eigen::VectorXd::Constant(1, x1);
    const double bound = bd.psi(x1v, x2);
    const double v1 = bd.v1(x1v);
    const double dv1 = bd.v1_gradient(x1v)(0);

    // a) L_{f1} V1(x1, phi1(x1)) + alpha(V1(x1)) = 0 for the example.
    const double residual = dv1 * plant.f1(x1v, bd.phi1(x1v))(0) + bd.alpha(v1);
    r.a_max_residual = std::max(r.a_max_residual, std::abs(residual));
    r.a.margin = std::min(r.a.margin, 1e-12 * (1.0 + x1 * x1) - std::abs(residual));

    // b) h1 is proportional to sin(u), so its supremum over u sits at u = pi/2.
    const double half_pi = std::numbers::pi / 2.0;
    const double h1_sup = plant.h1(x1v, x2, half_pi).norm();
    r.b_norm_margin = std::min(r.b_norm_margin, bound - h1_sup);
    const double lie_rhs = (1.0 - bd.eps) * bd.alpha(v1) + bd.eps * bd.alpha(bd.M);
    const double lie_on_curve = std::abs(dv1 * plant.h1(x1v, bd.phi1(x1v), half_pi)(0));
    r.b_lie_margin = std::min(r.b_lie_margin, lie_rhs - lie_on_curve);
    const double lie_in_box = std::abs(dv1 * plant.h1(x1v, x2, half_pi)(0));
    r.b_lie_box_margin = std::min(r.b_lie_box_margin, lie_rhs - lie_in_box);

    // c) d_x2 h1 = 0, d) h2 = 0 for every u.
    const double dh1 = (*plant.dh1_dx2)(x1v, x2, 1.0).norm();
    r.c.margin = std::min(r.c.margin, bound - dh1);
    r.d.margin = std::min(r.d.margin, bound - std::abs(plant.h2(x1v, x2, 1.0)));
    ++r.samples;
  }
  r.b.margin = std::min(r.b_norm_margin, r.b_lie_margin);

  r.a.pass = r.a.margin > 0.0;
  r.b.pass = r.b.margin >= 0.0;
  r.c.pass = r.c.margin >= 0.0;
  r.d.pass = r.d.margin >= 0.0;
  return r;
}

H3Result check_h3(double theta) {
  const double c = c_local(theta);
  const InclusionMaximum m = max_v_on_A(theta);
  return {m.value < c, m.value, m.argmax_x1, c};
}

double find_theta_star(double lo, double hi, double tol) {
  if (!(lo > 0.0 && lo < hi && tol > 0.0)) throw NoBracket("need 0 < lo < hi and tol > 0");
  if (!h3_holds(lo) || h3_holds(hi)) {
    throw NoBracket("inclusion must hold at lo and fail at hi");
  }
  const auto gap = [](double t) {
    return t < theta1() ? c_local(t) - max_v_on_A(t).value : -1.0;
  };
  const auto [a, b] = numerics::bisect(gap, lo, hi, tol);
  return 0.5 * (a + b);
}

HypothesisReport verify(double theta, std::uint64_t samples, std::uint64_t seed) {
  HypothesisReport rep;
  rep.theta = theta;
  rep.seed = seed;
  rep.h1 = check_h1(theta, samples, seed);
  rep.h2 = check_h2(theta, samples, seed);
  rep.h3 = check_h3(theta);
  return rep;
}

}  // namespace hybrid_stab
