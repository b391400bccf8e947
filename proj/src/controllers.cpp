#include "hybrid_stab/controllers.hpp"

#include <stdexcept>
#include <utility>

namespace hybrid_stab {

Mode mode_from_int(int q) {
  if (q == 1) return Mode::Local;
  if (q == 2) return Mode::Global;
  throw std::invalid_argument("mode must be 1 or 2");
}

HybridController::HybridController(ScalarField level, double c_ell, double c_tilde,
                                   ScalarField local_feedback, ScalarField global_feedback,
                                   ScalarField sub_level)
    : level_(std::move(level)),
      c_ell_(c_ell),
      c_tilde_(c_tilde),
      local_(std::move(local_feedback)),
      global_(std::move(global_feedback)),
      sub_level_(std::move(sub_level)) {
  if (!(c_tilde_ > 0.0 && c_tilde_ < c_ell_)) {
    throw std::invalid_argument("hysteresis thresholds must satisfy 0 < c_tilde < c_ell");
  }
}

HybridController HybridController::example(double theta, double c_tilde_factor,
                                           GlobalControllerParams<double> params) {
  if (!(c_tilde_factor > 0.0 && c_tilde_factor < 1.0)) {
    throw std::invalid_argument("c_tilde factor must lie in (0, 1)");
  }
  const double c_ell = c_local(theta);
  const LocalController<double> local(theta);
  return HybridController(
      [theta](const State<double>& x) { return v_local(theta, x); }, c_ell, c_tilde_factor * c_ell,
      [local](const State<double>& x) { return local(x); },
      [theta, params](const State<double>& x) { return phi_global(theta, params, x); },
      [](const State<double>& x) { return v_sub(x(0)); });
}

double HybridController::feedback(Mode q, const State<double>& x) const {
  return q == Mode::Local ? local_(x) : global_(x);
}

bool HybridController::in_flow_set(Mode q, const State<double>& x) const {
  const double v = level_(x);
  return q == Mode::Local ? v <= c_ell_ : v >= c_tilde_;
}

bool HybridController::in_jump_set(Mode q, const State<double>& x) const {
  const double v = level_(x);
  return q == Mode::Local ? v >= c_ell_ : v <= c_tilde_;
}

double HybridController::guard(Mode q, const State<double>& x) const {
  const double v = level_(x);
  const double tol = 1e-12 * (1.0 + v);
  return q == Mode::Local ? v - c_ell_ - tol : c_tilde_ - v - tol;
}

Decision hybrid_step_logic(const HybridController& k, const State<double>& x, Mode q) {
  if (k.guard(q, x) > 0.0) return Jump{switch_mode(q)};
  return Flow{k.feedback(q, x)};
}

}  // namespace hybrid_stab
