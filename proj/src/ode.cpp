#include "hybrid_stab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace hybrid_stab::ode {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// 5th minus 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner, dopri5).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace

DenseSegment::DenseSegment(double t0, double h, const Vec& y0, const Vec& y1, const Vec& k1,
                           const Vec& k7, const Vec& dense_term)
    : t0_(t0), h_(h), y1_(y1) {
  r1_ = y0;
  r2_ = y1 - y0;
  r3_ = h * k1 - r2_;
  r4_ = r2_ - h * k7 - r3_;
  r5_ = h * dense_term;
}

Vec DenseSegment::operator()(double t) const {
  if (t >= t1()) return y1_;
  if (t <= t0_) return r1_;
  const double s = (t - t0_) / h_;
  const double s1 = 1.0 - s;
  return r1_ + s * (r2_ + s1 * (r3_ + s * (r4_ + s1 * r5_)));
}

Dopri5::Dopri5(Rhs rhs, Tolerances tol) : rhs_(std::move(rhs)), tol_(tol) {
  if (!(tol_.rtol > 0.0 && tol_.atol > 0.0 && tol_.max_step > 0.0)) {
    throw std::invalid_argument("integrator tolerances must be positive");
  }
}

void Dopri5::reset(double t, const Vec& y) {
  t_ = t;
  y_ = y;
  k1_ = rhs_(t_, y_);
  if (!k1_.allFinite()) throw IntegratorFailure("non-finite derivative at reset");
  h_ = initial_step();
}

double Dopri5::initial_step() const {
  const Vec scale = (tol_.atol + tol_.rtol * y_.array().abs()).matrix();
  const double d0 = (y_.array() / scale.array()).matrix().norm() / std::sqrt(double(y_.size()));
  const double d1n = (k1_.array() / scale.array()).matrix().norm() / std::sqrt(double(y_.size()));
  double h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  return std::min(h, tol_.max_step);
}

DenseSegment Dopri5::advance(double h_limit) {
  if (!(h_limit > 0.0)) throw std::invalid_argument("step limit must be positive");
  const double h_min = 1e-14 * std::max(1.0, std::abs(t_));
  double h = std::min({h_, h_limit, tol_.max_step});

  while (true) {
    if (h < h_min && h < h_limit) throw IntegratorFailure("step size underflow");
    const Vec& k1 = k1_;
    const Vec k2 = rhs_(t_ + c2 * h, y_ + h * (a21 * k1));
    const Vec k3 = rhs_(t_ + c3 * h, y_ + h * (a31 * k1 + a32 * k2));
    const Vec k4 = rhs_(t_ + c4 * h, y_ + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = rhs_(t_ + c5 * h, y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 =
        rhs_(t_ + h, y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec y1 = y_ + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vec k7 = rhs_(t_ + h, y1);

    double err = std::numeric_limits<double>::infinity();
    if (y1.allFinite() && k7.allFinite()) {
      const Vec e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const Vec scale =
          (tol_.atol + tol_.rtol * y_.array().abs().max(y1.array().abs())).matrix();
      err = (e.array() / scale.array()).matrix().norm() / std::sqrt(double(y_.size()));
    }

    if (err <= 1.0) {
      const Vec dense = d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7;
      DenseSegment seg(t_, h, y_, y1, k1, k7, dense);
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      t_ += h;
      y_ = y1;
      k1_ = k7;
      h_ = std::min(h * factor, tol_.max_step);
      return seg;
    }
    if (!std::isfinite(err)) {
      h *= 0.25;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }
}

}  // namespace hybrid_stab::ode
