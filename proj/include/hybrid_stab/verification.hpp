#pragma once

#include <cstdint>
#include <optional>

#include "hybrid_stab/lyapunov.hpp"

namespace hybrid_stab {

/// Sampled verdict on one condition. `margin` is the worst slack over samples.
struct ConditionResult {
  bool pass = false;
  double margin = 0.0;
};

struct H1Result {
  bool pass = false;
  double margin = 0.0;  // min over samples of -L_{f_h} V_ell
  std::uint64_t samples = 0;
};

struct H2Result {
  ConditionResult a;  // exact identity; margin = min(1e-12 (1 + x1^2) - |residual|)
  ConditionResult b;  // min of the two inequalities below
  ConditionResult c;
  ConditionResult d;
  double a_max_residual = 0.0;
  double b_norm_margin = 0.0;     // Psi - sup_u ||h1||
  double b_lie_margin = 0.0;      // along x2 = phi1(x1)
  double b_lie_box_margin = 0.0;  // at the sampled x2
  std::uint64_t samples = 0;
};

struct H3Result {
  bool pass = false;
  double max_a = 0.0;
  double argmax_x1 = 0.0;
  double c_ell = 0.0;
};

struct HypothesisReport {
  double theta = 0.0;
  std::uint64_t seed = 0;
  H1Result h1;
  H2Result h2;
  H3Result h3;
  std::optional<double> theta_star;
};

/// L_{f_h} V_ell at x with u = phi_ell(x), example system, analytic gradient.
double lie_derivative_local(double theta, const Eigen::Vector2d& x);

/**
 * Local decrease on Omega_{c_ell}(V_ell) minus the ball of `exclusion_radius`.
 * Halton samples of (level fraction, angle) are mapped back through the
 * Cholesky factor of P and the inverse shear. Throws DegenerateRegion when the
 * sublevel set lies inside the excluded ball.
 */
H1Result check_h1(double theta, std::uint64_t samples, std::uint64_t seed,
                  double exclusion_radius = 1e-4);

/// Backstepping bounds a)-d) on x in [-50, 50]^2, supremum over u taken
/// analytically through |sin u| <= 1.
H2Result check_h2(double theta, std::uint64_t samples, std::uint64_t seed);

/// max_A V_ell < c_ell. Throws ThetaOutOfRange outside (0, theta1).
H3Result check_h3(double theta);

/// Bisection on the sign of c_ell - max_A V_ell. Requires check_h3 to pass at
/// lo and fail at hi (theta >= theta1 counts as failing); throws NoBracket.
double find_theta_star(double lo, double hi, double tol);

HypothesisReport verify(double theta, std::uint64_t samples, std::uint64_t seed);

}  // namespace hybrid_stab
