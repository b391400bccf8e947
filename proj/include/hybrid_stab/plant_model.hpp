#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "hybrid_stab/errors.hpp"

namespace hybrid_stab {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Flat state (x1_1, ..., x1_{n-1}, x2); x2 is always the last component.
template <typename Scalar>
using State = Vector<Scalar>;

/**
 * Two-block control-affine-in-x2 plant
 *
 *   x1' = f1(x1, x2) + h1(x1, x2, u)
 *   x2' = f2(x1, x2) u + h2(x1, x2, u)
 *
 * with x1 in R^{n-1}, x2 and u scalar. The perturbations h1, h2 depend on u,
 * which is what rules out classical backstepping. f2 must never vanish.
 *
 * The optional partials d f1 / d x2 and d h1 / d x2 are used by the generic
 * global controller; when absent a central difference is used instead.
 */
template <typename Scalar>
struct PlantModel {
  using Vec = Vector<Scalar>;
  using SubMap = std::function<Vec(const Vec& x1, Scalar x2)>;
  using SubInputMap = std::function<Vec(const Vec& x1, Scalar x2, Scalar u)>;
  using ScalarMap = std::function<Scalar(const Vec& x1, Scalar x2)>;
  using ScalarInputMap = std::function<Scalar(const Vec& x1, Scalar x2, Scalar u)>;

  Eigen::Index n = 0;
  SubMap f1;
  ScalarMap f2;
  SubInputMap h1;
  ScalarInputMap h2;
  std::optional<SubMap> df1_dx2;
  std::optional<SubInputMap> dh1_dx2;
};

/// The four blocks of the plant evaluated at one (x, u).
template <typename Scalar>
struct Blocks {
  Vector<Scalar> f1;
  Scalar f2;
  Vector<Scalar> h1;
  Scalar h2;
};

namespace detail {

template <typename Scalar>
void check_dimension(const PlantModel<Scalar>& plant, Eigen::Index size) {
  if (plant.n < 2 || size != plant.n) {
    throw std::invalid_argument("state dimension does not match the plant");
  }
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

template <typename Scalar>
Blocks<Scalar> evaluate_blocks(const PlantModel<Scalar>& plant, const State<Scalar>& x,
                               Scalar u) {
  check_dimension(plant, x.size());
  const Vector<Scalar> x1 = x.head(plant.n - 1);
  const Scalar x2 = x(plant.n - 1);
  return {plant.f1(x1, x2), plant.f2(x1, x2), plant.h1(x1, x2, u), plant.h2(x1, x2, u)};
}

}  // namespace detail

/// Exposes f1, f2, h1, h2 at (x, u). Throws F2Zero when |f2| is below epsilon.
template <typename Scalar>
Blocks<Scalar> decompose(const PlantModel<Scalar>& plant, const State<Scalar>& x, Scalar u) {
  Blocks<Scalar> b = detail::evaluate_blocks(plant, x, u);
  using std::abs;
  if (!(abs(b.f2) > std::numeric_limits<Scalar>::epsilon())) {
    throw F2Zero("f2(x1, x2) vanished; the plant leaves its admissible class");
  }
  return b;
}

/// Right-hand side (f1 + h1, f2 u + h2) of the open-loop plant.
template <typename Scalar>
State<Scalar> flow_field(const PlantModel<Scalar>& plant, const State<Scalar>& x, Scalar u) {
  const Blocks<Scalar> b = detail::evaluate_blocks(plant, x, u);
  State<Scalar> dx(plant.n);
  dx.head(plant.n - 1) = b.f1 + b.h1;
  dx(plant.n - 1) = b.f2 * u + b.h2;
  if (!detail::all_finite(dx)) {
    throw NonFiniteOutput("flow field produced a non-finite component");
  }
  return dx;
}

/**
 * Scalar example of the class, theta > 0:
 *
 *   x1' = x1 + x2 + theta x1^2 + theta (1 + x1) sin(u)
 *   x2' = u
 *
 * i.e. f1 = x1 + x2 + theta x1^2, f2 = 1, h1 = theta (1 + x1) sin(u), h2 = 0.
 */
template <typename Scalar>
struct ExampleSystem {
  Scalar theta;

  explicit ExampleSystem(Scalar theta_) : theta(theta_) {
    if (!(theta > Scalar(0))) {
      throw std::invalid_argument("theta must be positive");
    }
  }

  PlantModel<Scalar> model() const {
    using Vec = Vector<Scalar>;
    const Scalar th = theta;
    PlantModel<Scalar> p;
    p.n = 2;
    p.f1 = [th](const Vec& x1, Scalar x2) {
      Vec r(1);
      r(0) = x1(0) + x2 + th * x1(0) * x1(0);
      return r;
    };
    p.f2 = [](const Vec&, Scalar) { return Scalar(1); };
    p.h1 = [th](const Vec& x1, Scalar, Scalar u) {
      using std::sin;
      Vec r(1);
      r(0) = th * (Scalar(1) + x1(0)) * sin(u);
      return r;
    };
    p.h2 = [](const Vec&, Scalar, Scalar) { return Scalar(0); };
    p.df1_dx2 = [](const Vec&, Scalar) { return Vec::Ones(1).eval(); };
    p.dh1_dx2 = [](const Vec&, Scalar, Scalar) { return Vec::Zero(1).eval(); };
    return p;
  }
};

}  // namespace hybrid_stab
