#pragma once

// Test-only reference evaluations written directly from the scalar formulas,
// in long double, without Eigen or any library code path.

#include <cmath>

namespace oracle {

using real = long double;

inline real v_ell(real theta, real x1, real x2) {
  const real w1 = x1 - theta * x2;
  return 2.5L * w1 * w1 + 2.0L * w1 * x2 + 0.5L * x2 * x2;
}

inline real phi1(real theta, real x1) { return -2.7456L * x1 - theta * x1 * x1; }

inline real xi(real t) { return -2.0L + t * (-396.0L + 2308.0L * t + 9768.0L * t * t + 1440.0L * t * t * t); }

/// Brute-force max of V_ell over A on a uniform grid of `n` intervals.
inline real max_on_a(real theta, int n) {
  real best = -1.0L;
  for (int i = 0; i <= n; ++i) {
    const real x1 = -0.2L + 0.4L * i / n;
    const real v = v_ell(theta, x1, phi1(theta, x1));
    if (v > best) best = v;
  }
  return best;
}

/// Right-hand side of the example system, written out by hand.
inline void example_rhs(real theta, real x1, real x2, real u, real& dx1, real& dx2) {
  dx1 = x1 + x2 + theta * x1 * x1 + theta * (1.0L + x1) * std::sin(u);
  dx2 = u;
}

/// Lie derivative of V_ell by central finite differences of V along the flow.
inline real lie_v_ell_fd(real theta, real x1, real x2, real u) {
  real dx1, dx2;
  example_rhs(theta, x1, x2, u, dx1, dx2);
  const real h = 1e-7L;
  return (v_ell(theta, x1 + h * dx1, x2 + h * dx2) - v_ell(theta, x1 - h * dx1, x2 - h * dx2)) /
         (2.0L * h);
}

}  // namespace oracle
