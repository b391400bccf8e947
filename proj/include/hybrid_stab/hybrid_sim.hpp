#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid_stab/controllers.hpp"
#include "hybrid_stab/plant_model.hpp"

namespace hybrid_stab {

/// One sample of a hybrid arc at hybrid time (t, j).
struct HybridTimePoint {
  double t;
  int j;
  Mode q;
  State<double> x;
  double u;
  double v_ell;
  double v_1;
};

enum class Termination { Converged, TMaxReached, JMaxReached, IntegratorFailure };

std::string_view to_string(Termination t);

struct SolutionTrace {
  std::vector<HybridTimePoint> points;
  Termination termination = Termination::TMaxReached;
  std::string failure;  // set when termination == IntegratorFailure

  int jumps() const { return points.empty() ? 0 : points.back().j; }
  const HybridTimePoint& final_point() const { return points.back(); }
  /// Continuous time at which each jump happened, in order.
  std::vector<double> jump_times() const;
  /// Shortest flow duration between two consecutive jumps; +inf with < 2 jumps.
  double min_inter_jump_flow() const;
};

struct SimOptions {
  double t_max = 50.0;
  int j_max = 20;
  double convergence_radius = 1e-6;
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.01;
  double event_tolerance = 1e-10;
  double output_interval = 1e-3;

  /// Throws std::invalid_argument when any tolerance is not strictly positive.
  void validate() const;
};

/**
 * Closed-loop hybrid simulation of `plant` under `k`.
 *
 * Jumps are taken only on strict violation of C_q, flows are integrated with
 * adaptive Dormand-Prince and stopped at the first strict guard crossing,
 * located by bisection on the dense output. Samples are recorded every
 * `output_interval`, plus the points immediately before and after each jump.
 * Integrator failures are reported through `termination`, never thrown.
 */
SolutionTrace simulate(const PlantModel<double>& plant, const HybridController& k,
                       const State<double>& x0, Mode q0, const SimOptions& opts = {});

/// `count` equally spaced initial states on the circle of `radius`, starting
/// at angle 0, all in mode 1. Traces are returned in input order.
std::vector<SolutionTrace> run_ball_of_initial_conditions(const PlantModel<double>& plant,
                                                          const HybridController& k,
                                                          double radius, std::size_t count,
                                                          const SimOptions& opts = {});

}  // namespace hybrid_stab
