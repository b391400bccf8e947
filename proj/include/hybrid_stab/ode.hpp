#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <stdexcept>

namespace hybrid_stab::ode {

using Vec = Eigen::VectorXd;
using Rhs = std::function<Vec(double t, const Vec& y)>;

/// Raised on step-size underflow or a non-finite state.
class IntegratorFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One accepted Dormand-Prince step with its 4th-order continuous extension.
class DenseSegment {
 public:
  DenseSegment() = default;
  DenseSegment(double t0, double h, const Vec& y0, const Vec& y1, const Vec& k1, const Vec& k7,
               const Vec& dense_term);

  double t0() const { return t0_; }
  double t1() const { return t0_ + h_; }
  double h() const { return h_; }
  const Vec& y0() const { return r1_; }
  const Vec& y1() const { return y1_; }

  /// State at t in [t0, t1].
  Vec operator()(double t) const;

 private:
  double t0_ = 0.0;
  double h_ = 0.0;
  Vec y1_;
  Vec r1_, r2_, r3_, r4_, r5_;
};

struct Tolerances {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.01;
};

/**
 * Adaptive Dormand-Prince 5(4) integrator (FSAL). Each call to advance()
 * takes exactly one accepted step and returns it as a DenseSegment.
 */
class Dopri5 {
 public:
  Dopri5(Rhs rhs, Tolerances tol);

  void reset(double t, const Vec& y);
  double t() const { return t_; }
  const Vec& y() const { return y_; }

  /// One accepted step no longer than `h_limit` (> 0).
  DenseSegment advance(double h_limit);

 private:
  double initial_step() const;

  Rhs rhs_;
  Tolerances tol_;
  double t_ = 0.0;
  Vec y_;
  Vec k1_;
  double h_ = 0.0;
};

}  // namespace hybrid_stab::ode
