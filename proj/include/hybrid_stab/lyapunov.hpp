#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "hybrid_stab/errors.hpp"
#include "hybrid_stab/plant_model.hpp"

namespace hybrid_stab {

// Constants certifying the backstepping bounds for the example system.
inline constexpr double kSubGain = 2.7456;     // phi1 linear gain
inline constexpr double kAlphaSlope = 3.4912;  // alpha(s) = kAlphaSlope * s
inline constexpr double kEpsilon = 0.89;
inline constexpr double kAttractorLevel = 0.02;  // M

// ---------------------------------------------------------------------------
// Local quadratic Lyapunov function  V_ell(x) = w^T P w,  w = [x1 - theta x2, x2]

template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 2> local_lyapunov_matrix() {
  Eigen::Matrix<Scalar, 2, 2> p;
  p << Scalar(5) / Scalar(2), Scalar(1), Scalar(1), Scalar(1) / Scalar(2);
  return p;
}

/// Linear change of coordinates x -> w.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> local_coordinates(Scalar theta) {
  Eigen::Matrix<Scalar, 2, 2> t;
  t << Scalar(1), -theta, Scalar(0), Scalar(1);
  return t;
}

/// Quadratic form of V_ell in the original coordinates, T^T P T.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> local_form(Scalar theta) {
  const auto t = local_coordinates(theta);
  return t.transpose() * local_lyapunov_matrix<Scalar>() * t;
}

template <typename Derived>
typename Derived::Scalar v_local(typename Derived::Scalar theta,
                                 const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, 2, 1> w(x(0) - theta * x(1), x(1));
  return w.dot(local_lyapunov_matrix<Scalar>() * w);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> v_local_gradient(
    typename Derived::Scalar theta, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, 2, 1> xv(x(0), x(1));
  return Scalar(2) * local_form(theta) * xv;
}

// ---------------------------------------------------------------------------
// Level constant c_ell and its admissibility bound theta1

template <typename Scalar>
Scalar level_poly_p1(Scalar t) {
  return Scalar(-396) + t * (Scalar(2308) + t * (Scalar(9768) + t * Scalar(1440)));
}

template <typename Scalar>
Scalar level_poly_p2(Scalar t) {
  return Scalar(792) +
         t * (Scalar(7000) + t * (Scalar(20856) + t * (Scalar(21672) + t * Scalar(2160))));
}

/// xi(theta) = -2 + theta p1(theta); c_ell is defined below its first positive root.
template <typename Scalar>
Scalar level_poly_xi(Scalar t) {
  return Scalar(-2) + t * level_poly_p1(t);
}

/// Smallest positive root of xi, bisected to full double precision and cached.
double theta1();

template <typename Scalar>
Scalar c_local(Scalar theta) {
  if (!(theta > Scalar(0)) || !(theta < Scalar(theta1()))) {
    throw ThetaOutOfRange("c_ell requires 0 < theta < theta1");
  }
  const Scalar ratio = (Scalar(2) - theta * level_poly_p1(theta)) / (theta * level_poly_p2(theta));
  return ratio * ratio;
}

// ---------------------------------------------------------------------------
// Backstepping certificate for the x1-subsystem

template <typename Scalar>
Scalar v_sub(Scalar x1) {
  return x1 * x1 / Scalar(2);
}

template <typename Scalar>
Scalar alpha(Scalar s) {
  return Scalar(kAlphaSlope) * s;
}

/// Stabilizing virtual control for x1' = f1(x1, x2) with x2 as input.
template <typename Scalar>
Scalar phi_sub(Scalar theta, Scalar x1) {
  return -Scalar(kSubGain) * x1 - theta * x1 * x1;
}

/// Derivative of phi_sub with respect to x1.
template <typename Scalar>
Scalar phi_sub_slope(Scalar theta, Scalar x1) {
  return -(Scalar(kSubGain) + Scalar(2) * theta * x1);
}

/// Bound on the u-dependent perturbations, Psi(x1, x2) = theta (1 + |x1|).
template <typename Scalar>
Scalar psi(Scalar theta, Scalar x1) {
  using std::abs;
  return theta * (Scalar(1) + abs(x1));
}

/// (V1, phi1, alpha, Psi, eps, M) for a general plant; x1 is a vector.
template <typename Scalar>
struct BacksteppingData {
  using Vec = Vector<Scalar>;
  std::function<Scalar(const Vec&)> v1;
  std::function<Vec(const Vec&)> v1_gradient;
  std::function<Scalar(const Vec&)> phi1;
  std::function<Vec(const Vec&)> phi1_gradient;
  std::function<Scalar(Scalar)> alpha;
  std::function<Scalar(const Vec&, Scalar)> psi;
  Scalar eps = Scalar(kEpsilon);
  Scalar M = Scalar(kAttractorLevel);
};

template <typename Scalar>
BacksteppingData<Scalar> example_backstepping_data(Scalar theta) {
  using Vec = Vector<Scalar>;
  BacksteppingData<Scalar> bd;
  bd.v1 = [](const Vec& x1) { return v_sub(x1(0)); };
  bd.v1_gradient = [](const Vec& x1) { return Vec::Constant(1, x1(0)).eval(); };
  bd.phi1 = [theta](const Vec& x1) { return phi_sub(theta, x1(0)); };
  bd.phi1_gradient = [theta](const Vec& x1) {
    return Vec::Constant(1, phi_sub_slope(theta, x1(0))).eval();
  };
  bd.alpha = [](Scalar s) { return alpha(s); };
  bd.psi = [theta](const Vec& x1, Scalar) { return psi(theta, x1(0)); };
  return bd;
}

// ---------------------------------------------------------------------------
// Attractor A = { V1(x1) <= M, x2 = phi1(x1) } and the inclusion maximum

struct SetA {
  double theta;
  double M = kAttractorLevel;

  /// |x1| bound of A, sqrt(2 M).
  double x1_bound() const;
  bool contains(const Eigen::Vector2d& x, double tol = 1e-12) const;
  /// Points of A ordered by x1, endpoints included.
  std::vector<Eigen::Vector2d> polyline(int points) const;
};

struct InclusionMaximum {
  double value;
  double argmax_x1;
};

/// max of V_ell over A: dense grid of 10^4 intervals refined by golden section.
InclusionMaximum max_v_on_A(double theta);

}  // namespace hybrid_stab
