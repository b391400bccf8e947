#include "hybrid_stab/hybrid_sim.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hybrid_stab/numerics.hpp"
#include "hybrid_stab/ode.hpp"

namespace hybrid_stab {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "Converged";
    case Termination::TMaxReached:
      return "TMaxReached";
    case Termination::JMaxReached:
      return "JMaxReached";
    case Termination::IntegratorFailure:
      return "IntegratorFailure";
  }
  return "Unknown";
}

std::vector<double> SolutionTrace::jump_times() const {
  std::vector<double> times;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].j != points[i - 1].j) times.push_back(points[i].t);
  }
  return times;
}

double SolutionTrace::min_inter_jump_flow() const {
  const auto times = jump_times();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < times.size(); ++i) best = std::min(best, times[i] - times[i - 1]);
  return best;
}

void SimOptions::validate() const {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (j_max < 0) throw std::invalid_argument("j_max must be non-negative");
  if (!(convergence_radius > 0.0 && rtol > 0.0 && atol > 0.0 && max_step > 0.0 &&
        event_tolerance > 0.0 && output_interval > 0.0)) {
    throw std::invalid_argument("simulation tolerances must be strictly positive");
  }
}

namespace {

class Simulation {
 public:
  Simulation(const PlantModel<double>& plant, const HybridController& k, const SimOptions& opts)
      : plant_(plant), k_(k), opts_(opts) {}

  SolutionTrace run(const State<double>& x0, Mode q0) {
    if (x0.size() != plant_.n || !x0.allFinite()) {
      throw std::invalid_argument("initial state must be finite and match the plant dimension");
    }
    t_ = 0.0;
    j_ = 0;
    q_ = q0;
    x_ = x0;
    record(t_, x_);

    try {
      trace_.termination = loop();
    } catch (const ode::IntegratorFailure& e) {
      trace_.termination = Termination::IntegratorFailure;
      trace_.failure = e.what();
    } catch (const Error& e) {
      trace_.termination = Termination::IntegratorFailure;
      trace_.failure = e.what();
    }
    return std::move(trace_);
  }

 private:
  Termination loop() {
    while (true) {
      const Decision d = hybrid_step_logic(k_, x_, q_);
      if (const auto* jump = std::get_if<Jump>(&d)) {
        if (j_ >= opts_.j_max) return Termination::JMaxReached;
        q_ = jump->next;
        ++j_;
        record(t_, x_);
        continue;
      }
      if (at_rest(std::get<Flow>(d).u)) return Termination::Converged;
      if (t_ >= opts_.t_max) return Termination::TMaxReached;
      if (const auto done = flow()) return *done;
    }
  }

  bool at_rest(double u) const {
    return x_.norm() <= opts_.convergence_radius && flow_field(plant_, x_, u).norm() == 0.0;
  }

  /// Integrates in the current mode until a strict guard crossing (returns
  /// nullopt, state left just past the crossing) or a terminal condition.
  std::optional<Termination> flow() {
    const Mode q = q_;
    ode::Dopri5 integrator(
        [this, q](double, const ode::Vec& x) { return flow_field(plant_, x, k_.feedback(q, x)); },
        {opts_.rtol, opts_.atol, opts_.max_step});
    integrator.reset(t_, x_);
    double near_since = std::numeric_limits<double>::quiet_NaN();

    while (true) {
      const double remaining = opts_.t_max - t_;
      if (remaining <= 0.0) {
        record_final();
        return Termination::TMaxReached;
      }
      const ode::DenseSegment seg = integrator.advance(remaining);
      double prev = seg.t0();

      // Probe every output time inside the step, then the step end.
      auto k_out = static_cast<long long>(std::floor(seg.t0() / opts_.output_interval)) + 1;
      while (true) {
        const double t_out = static_cast<double>(k_out) * opts_.output_interval;
        const bool is_sample = t_out <= seg.t1();
        const double tau = is_sample ? t_out : seg.t1();
        const State<double> x = seg(tau);

        if (k_.guard(q, x) > 0.0) {
          locate_event(seg, prev, tau);
          return std::nullopt;
        }
        if (is_sample) {
          record(tau, x);
          if (x.norm() <= opts_.convergence_radius) {
            if (std::isnan(near_since)) near_since = tau;
            if (tau - near_since >= opts_.output_interval * (1.0 - 1e-9)) {
              t_ = tau;
              x_ = x;
              return Termination::Converged;
            }
          } else {
            near_since = std::numeric_limits<double>::quiet_NaN();
          }
          prev = tau;
          ++k_out;
          if (tau == seg.t1()) break;
        } else {
          break;
        }
      }
      t_ = seg.t1();
      x_ = seg.y1();
    }
  }

  void locate_event(const ode::DenseSegment& seg, double lo, double hi) {
    const Mode q = q_;
    const auto [a, b] = numerics::bisect([&](double s) { return k_.guard(q, seg(s)); }, lo, hi,
                                         opts_.event_tolerance);
    (void)a;
    t_ = b;
    x_ = seg(b);
    record(t_, x_);
  }

  void record_final() {
    const auto& last = trace_.points.back();
    if (last.t != t_ || last.j != j_) record(t_, x_);
  }

  void record(double t, const State<double>& x) {
    if (!trace_.points.empty()) {
      const auto& last = trace_.points.back();
      if (last.t == t && last.j == j_) return;
    }
    trace_.points.push_back({t, j_, q_, x, k_.feedback(q_, x), k_.level(x), k_.sub_level(x)});
  }

  const PlantModel<double>& plant_;
  const HybridController& k_;
  const SimOptions& opts_;
  SolutionTrace trace_;
  double t_ = 0.0;
  int j_ = 0;
  Mode q_ = Mode::Local;
  State<double> x_;
};

}  // namespace

SolutionTrace simulate(const PlantModel<double>& plant, const HybridController& k,
                       const State<double>& x0, Mode q0, const SimOptions& opts) {
  opts.validate();
  return Simulation(plant, k, opts).run(x0, q0);
}

std::vector<SolutionTrace> run_ball_of_initial_conditions(const PlantModel<double>& plant,
                                                          const HybridController& k,
                                                          double radius, std::size_t count,
                                                          const SimOptions& opts) {
  if (!(radius >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  if (count == 0) throw std::invalid_argument("count must be at least 1");
  if (plant.n != 2) throw std::invalid_argument("initial circle requires a planar plant");
  opts.validate();

  std::vector<std::future<SolutionTrace>> jobs;
  jobs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    State<double> x0(2);
    x0 << radius * std::cos(angle), radius * std::sin(angle);
    jobs.push_back(std::async(std::launch::async, [&plant, &k, &opts, x0] {
      return simulate(plant, k, x0, Mode::Local, opts);
    }));
  }
  std::vector<SolutionTrace> traces;
  traces.reserve(count);
  for (auto& job : jobs) traces.push_back(job.get());
  return traces;
}

}  // namespace hybrid_stab
