#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <variant>

#include "hybrid_stab/errors.hpp"
#include "hybrid_stab/lyapunov.hpp"
#include "hybrid_stab/plant_model.hpp"

namespace hybrid_stab {

// ---------------------------------------------------------------------------
// Local linear feedback  phi_ell(x) = -k1 x1 + k2 x2

template <typename Scalar = double>
class LocalController {
 public:
  /// Throws std::invalid_argument if theta < 0 or if the linearized closed
  /// loop of the example system is not Hurwitz.
  explicit LocalController(Scalar theta)
      : theta_(theta),
        k1_(Scalar(7) + theta),
        k2_(Scalar(-4) + Scalar(4) * theta + theta * (Scalar(1) + theta)) {
    if (!(theta >= Scalar(0))) throw std::invalid_argument("theta must be non-negative");
    const Eigen::Matrix2d a = linearization().template cast<double>();
    const auto eig = a.eigenvalues();
    if (!(eig.real().array() < 0.0).all()) {
      throw std::invalid_argument("local closed loop is not Hurwitz");
    }
  }

  Scalar theta() const { return theta_; }
  Scalar k1() const { return k1_; }
  Scalar k2() const { return k2_; }

  /// Jacobian at the origin of the example system closed with this feedback.
  Eigen::Matrix<Scalar, 2, 2> linearization() const {
    Eigen::Matrix<Scalar, 2, 2> a;
    a << Scalar(1) - theta_ * k1_, Scalar(1) + theta_ * k2_, -k1_, k2_;
    return a;
  }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x) const {
    return -x(0) * k1_ + x(1) * k2_;
  }

 private:
  Scalar theta_;
  Scalar k1_;
  Scalar k2_;
};

template <typename Scalar, typename Derived>
Scalar phi_local(const LocalController<Scalar>& ctrl, const Eigen::MatrixBase<Derived>& x) {
  return ctrl(x);
}

// ---------------------------------------------------------------------------
// Global practical feedback

template <typename Scalar = double>
struct GlobalControllerParams {
  Scalar c = Scalar(10);
  Scalar a = Scalar(10);
  Scalar M = Scalar(kAttractorLevel);

  /// K_V = 2 (M + a) / a^2
  Scalar k_v() const { return Scalar(2) * (M + a) / (a * a); }
};

/// Delta(x1, x2) of the example closed form; depends on x1 only.
template <typename Scalar>
Scalar delta_example(Scalar theta, const GlobalControllerParams<Scalar>& params, Scalar x1) {
  using std::abs;
  const Scalar kv = params.k_v();
  return theta * kv * (Scalar(1) + abs(x1)) *
         (abs(x1) / kv + Scalar(1) + abs(Scalar(kSubGain) + Scalar(2) * theta * x1));
}

/// Closed-form global controller for the example system.
template <typename Derived>
typename Derived::Scalar phi_global(typename Derived::Scalar theta,
                                    const GlobalControllerParams<typename Derived::Scalar>& params,
                                    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar x1 = x(0);
  const Scalar x2 = x(1);
  const Scalar kv = params.k_v();
  const Scalar delta = delta_example(theta, params, x1);
  return -(Scalar(kSubGain) + Scalar(2) * theta * x1) * (x1 + x2 + theta * x1 * x1) -
         x1 / (Scalar(2) * kv) -
         (x2 - phi_sub(theta, x1)) / kv * (params.c + params.c / Scalar(4) * delta * delta);
}

/**
 * Global controller for a general plant,
 *
 *   u = [K_V dphi1 . f1 - dV1 . Int_0^1 d_x2 f1(x1, eta(s)) ds
 *        - (x2 - phi1)(c + c/4 Delta^2)] / (K_V f2)
 *
 * with eta(s) = s x2 + (1 - s) phi1(x1) and
 *
 *   Delta = |dV1| Int_0^1 Psi(x1, eta(s)) ds + Psi(x1, x2) K_V (1 + |dphi1|).
 *
 * Integrals use 16-point Gauss-Legendre. When the plant has no analytic
 * d_x2 f1, a central difference with step 1e-6 (1 + |x2|) is used.
 */
template <typename Scalar>
Scalar phi_global_generic(const PlantModel<Scalar>& plant, const BacksteppingData<Scalar>& bd,
                          const GlobalControllerParams<Scalar>& params, const State<Scalar>& x) {
  using Vec = Vector<Scalar>;
  using std::abs;
  detail::check_dimension(plant, x.size());
  const Eigen::Index m = plant.n - 1;
  const Vec x1 = x.head(m);
  const Scalar x2 = x(m);

  const Scalar f2 = plant.f2(x1, x2);
  if (!(abs(f2) > std::numeric_limits<Scalar>::epsilon())) {
    throw F2Zero("f2(x1, x2) vanished; the generic global controller is undefined");
  }

  const Scalar kv = params.k_v();
  const Scalar phi1 = bd.phi1(x1);
  const Vec dv1 = bd.v1_gradient(x1);
  const Vec dphi1 = bd.phi1_gradient(x1);
  const auto eta = [&](Scalar s) { return s * x2 + (Scalar(1) - s) * phi1; };

  const auto df1_dx2 = [&](Scalar z) -> Vec {
    if (plant.df1_dx2) return (*plant.df1_dx2)(x1, z);
    const Scalar h = Scalar(1e-6) * (Scalar(1) + abs(z));
    return (plant.f1(x1, z + h) - plant.f1(x1, z - h)) / (Scalar(2) * h);
  };

  using Quadrature = boost::math::quadrature::gauss<Scalar, 16>;
  Scalar coupling = Scalar(0);
  for (Eigen::Index i = 0; i < m; ++i) {
    coupling += dv1(i) * Quadrature::integrate([&](Scalar s) { return df1_dx2(eta(s))(i); },
                                               Scalar(0), Scalar(1));
  }
  const Scalar psi_mean =
      Quadrature::integrate([&](Scalar s) { return bd.psi(x1, eta(s)); }, Scalar(0), Scalar(1));
  const Scalar delta =
      dv1.norm() * psi_mean + bd.psi(x1, x2) * kv * (Scalar(1) + dphi1.norm());

  const Scalar lie_phi1 = dphi1.dot(plant.f1(x1, x2));
  const Scalar bracket = kv * lie_phi1 - coupling -
                         (x2 - phi1) * (params.c + params.c / Scalar(4) * delta * delta);
  return bracket / (kv * f2);
}

// ---------------------------------------------------------------------------
// Hysteresis-switched hybrid controller, modes {1, 2}

enum class Mode : int { Local = 1, Global = 2 };

/// q -> 3 - q
constexpr Mode switch_mode(Mode q) {
  return q == Mode::Local ? Mode::Global : Mode::Local;
}

/// Converts a numeric mode; throws std::invalid_argument outside {1, 2}.
Mode mode_from_int(int q);

struct Flow {
  double u;
};
struct Jump {
  Mode next;
};
using Decision = std::variant<Flow, Jump>;

/**
 * Mode 1 applies the local feedback on C1 = { V <= c_ell }, mode 2 the global
 * feedback on C2 = { V >= c_tilde }, with 0 < c_tilde < c_ell. D_q is the
 * closure of the complement of C_q and G_q = { 3 - q }.
 *
 * `level` is V_ell; `sub_level` (V1) is only carried along for recording.
 */
class HybridController {
 public:
  using ScalarField = std::function<double(const State<double>&)>;

  HybridController(ScalarField level, double c_ell, double c_tilde, ScalarField local_feedback,
                   ScalarField global_feedback, ScalarField sub_level);

  /// Example-system controller with c_tilde = c_tilde_factor * c_ell.
  static HybridController example(double theta, double c_tilde_factor = 0.5,
                                  GlobalControllerParams<double> params = {});

  double level(const State<double>& x) const { return level_(x); }
  double sub_level(const State<double>& x) const { return sub_level_(x); }
  double c_ell() const { return c_ell_; }
  double c_tilde() const { return c_tilde_; }
  double feedback(Mode q, const State<double>& x) const;

  bool in_flow_set(Mode q, const State<double>& x) const;
  bool in_jump_set(Mode q, const State<double>& x) const;

  /// Positive exactly when x strictly violates C_q beyond the roundoff
  /// tolerance 1e-12 (1 + V).
  double guard(Mode q, const State<double>& x) const;

 private:
  ScalarField level_;
  double c_ell_;
  double c_tilde_;
  ScalarField local_;
  ScalarField global_;
  ScalarField sub_level_;
};

/// Flow on C_q (boundary included), jump only on strict violation.
Decision hybrid_step_logic(const HybridController& k, const State<double>& x, Mode q);

}  // namespace hybrid_stab
