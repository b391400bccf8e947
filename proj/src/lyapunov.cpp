#include "hybrid_stab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hybrid_stab/numerics.hpp"

namespace hybrid_stab {

namespace {

double compute_theta1() {
  // xi(0) = -2; scan for the first sign change, then bisect to full precision.
  constexpr double step = 1e-3;
  double lo = 0.0;
  double hi = step;
  while (level_poly_xi(hi) < 0.0) {
    lo = hi;
    hi += step;
    if (hi > 1.0) throw std::logic_error("xi has no positive root below 1");
  }
  const auto [a, b] = numerics::bisect([](double t) { return level_poly_xi(t); }, lo, hi, 0.0);
  return std::abs(level_poly_xi(a)) <= std::abs(level_poly_xi(b)) ? a : b;
}

}  // namespace

double theta1() {
  static const double value = compute_theta1();
  return value;
}

double SetA::x1_bound() const { return std::sqrt(2.0 * M); }

bool SetA::contains(const Eigen::Vector2d& x, double tol) const {
  return v_sub(x(0)) <= M + tol && std::abs(x(1) - phi_sub(theta, x(0))) <= tol;
}

std::vector<Eigen::Vector2d> SetA::polyline(int points) const {
  if (points < 2) throw std::invalid_argument("polyline needs at least two points");
  const double r = x1_bound();
  std::vector<Eigen::Vector2d> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double x1 = i + 1 == points ? r : -r + 2.0 * r * i / (points - 1);
    out.emplace_back(x1, phi_sub(theta, x1));
  }
  return out;
}

InclusionMaximum max_v_on_A(double theta) {
  const SetA set{theta};
  const double r = set.x1_bound();
  const auto g = [theta](double x1) {
    return v_local(theta, Eigen::Vector2d(x1, phi_sub(theta, x1)));
  };

  constexpr int intervals = 10000;
  const auto grid = [r](int i) { return i == intervals ? r : -r + 2.0 * r * i / intervals; };
  int best = 0;
  double best_value = g(grid(0));
  for (int i = 1; i <= intervals; ++i) {
    const double v = g(grid(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  InclusionMaximum result{best_value, grid(best)};
  const double a = grid(std::max(best - 1, 0));
  const double b = grid(std::min(best + 1, intervals));
  const auto [x, v] = numerics::golden_section_max(g, a, b, 1e-12);
  if (v > result.value) result = {v, x};
  return result;
}

}  // namespace hybrid_stab
