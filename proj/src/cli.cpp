#include "hybrid_stab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "hybrid_stab/hybrid_sim.hpp"
#include "hybrid_stab/io.hpp"
#include "hybrid_stab/verification.hpp"

namespace hybrid_stab::cli {

namespace {

/// Invalid flag values; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double theta = 0.06;
  std::string x0 = "2,0";
  int q0 = 1;
  double t_max = 50.0;
  int j_max = 20;
  double c_tilde_factor = 0.5;
  double output_interval = 1e-3;
  std::string out;
  std::uint64_t seed = 7;
  std::uint64_t samples = 100000;
  bool svg = false;
  double radius = 2.0;
  std::size_t count = 5;
  double lo = 0.05;
  double hi = 0.08;
  double tol = 1e-5;
  bool with_theta_star = false;
  double sweep_min = 0.001;
  double sweep_max = 0.12;
  double sweep_step = 0.001;
};

State<double> parse_state(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("x0 must be two comma-separated numbers, got '" + text + "'");
    }
  }
  if (values.size() != 2 || !std::isfinite(values[0]) || !std::isfinite(values[1])) {
    throw UsageError("x0 must be two comma-separated finite numbers, got '" + text + "'");
  }
  State<double> x(2);
  x << values[0], values[1];
  return x;
}

void require_theta(double theta) {
  if (!(theta > 0.0)) throw UsageError("theta must be positive");
  if (!(theta < theta1())) {
    throw UsageError("theta must be below theta1 = " + io::format_real(theta1()) +
                     " for c_ell to be defined");
  }
}

SimOptions sim_options(const RunConfig& cfg) {
  SimOptions opts;
  opts.t_max = cfg.t_max;
  opts.j_max = cfg.j_max;
  opts.output_interval = cfg.output_interval;
  try {
    opts.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return opts;
}

HybridController controller(const RunConfig& cfg) {
  require_theta(cfg.theta);
  if (!(cfg.c_tilde_factor > 0.0 && cfg.c_tilde_factor < 1.0)) {
    throw UsageError("c-tilde-factor must lie in (0, 1)");
  }
  return HybridController::example(cfg.theta, cfg.c_tilde_factor);
}

Mode initial_mode(int q0) {
  try {
    return mode_from_int(q0);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

void print_summary(std::ostream& out, const SolutionTrace& trace) {
  const auto& last = trace.final_point();
  out << "termination=" << to_string(trace.termination) << " jumps=" << trace.jumps()
      << " final_norm=" << io::format_real(last.x.norm()) << " final_t=" << io::format_real(last.t);
  if (!trace.failure.empty()) out << " failure=\"" << trace.failure << '"';
  out << '\n';
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto k = controller(cfg);
  const auto opts = sim_options(cfg);
  const auto x0 = parse_state(cfg.x0);
  const auto plant = ExampleSystem<double>(cfg.theta).model();
  const auto trace = simulate(plant, k, x0, initial_mode(cfg.q0), opts);
  {
    auto f = open_file(cfg.out.empty() ? "trace.csv" : cfg.out);
    io::write_trace_csv(f, trace);
  }
  print_summary(out, trace);
  return trace.termination == Termination::IntegratorFailure ? kRuntimeFailure : kSuccess;
}

int cmd_figures(const RunConfig& cfg, std::ostream& out) {
  const auto k = controller(cfg);
  const auto opts = sim_options(cfg);
  if (!(cfg.radius >= 0.0) || cfg.count == 0) {
    throw UsageError("radius must be non-negative and count at least 1");
  }
  const auto plant = ExampleSystem<double>(cfg.theta).model();
  const auto main = simulate(plant, k, parse_state(cfg.x0), initial_mode(cfg.q0), opts);
  const auto ball = run_ball_of_initial_conditions(plant, k, cfg.radius, cfg.count, opts);
  const auto files = io::write_figures(cfg.out.empty() ? "figures" : cfg.out, main, ball,
                                       SetA{cfg.theta}, cfg.svg);

  bool failed = main.termination == Termination::IntegratorFailure;
  out << "main: ";
  print_summary(out, main);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    out << "trajectory " << i << ": ";
    print_summary(out, ball[i]);
    failed = failed || ball[i].termination == Termination::IntegratorFailure;
  }
  out << "wrote " << files.v_ell.string() << ' ' << files.components.string() << ' '
      << files.phase.string() << ' ' << files.set_a.string();
  for (const auto& p : files.svg) out << ' ' << p.string();
  out << '\n';
  return failed ? kRuntimeFailure : kSuccess;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  require_theta(cfg.theta);
  if (cfg.samples == 0) throw UsageError("samples must be at least 1");
  HypothesisReport report = verify(cfg.theta, cfg.samples, cfg.seed);
  if (cfg.with_theta_star) report.theta_star = find_theta_star(cfg.lo, cfg.hi, cfg.tol);
  const std::string text = io::to_json(report).dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
  } else {
    auto f = open_file(cfg.out);
    f << text;
    out << "wrote " << cfg.out << '\n';
  }
  return kSuccess;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.sweep_min > 0.0 && cfg.sweep_max >= cfg.sweep_min && cfg.sweep_step > 0.0)) {
    throw UsageError("sweep needs 0 < min <= max and step > 0");
  }
  const auto rows = io::sweep_inclusion(cfg.sweep_min, cfg.sweep_max, cfg.sweep_step);
  const std::string path = cfg.out.empty() ? "sweep.csv" : cfg.out;
  {
    auto f = open_file(path);
    io::write_sweep_csv(f, rows);
  }
  out << "wrote " << path << '\n';
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].valid && rows[i - 1].h3_pass && !(rows[i].valid && rows[i].h3_pass)) {
      const double star = find_theta_star(rows[i - 1].theta, rows[i].theta, 1e-9);
      out << "transition between " << io::format_real(rows[i - 1].theta) << " and "
          << io::format_real(rows[i].theta) << "\ntheta_star=" << io::format_real(star) << '\n';
      return kSuccess;
    }
  }
  throw NoBracket("no pass-to-fail transition of the inclusion condition on the grid");
}

int cmd_theta_star(const RunConfig& cfg, std::ostream& out) {
  const double star = find_theta_star(cfg.lo, cfg.hi, cfg.tol);
  out << "theta_star=" << io::format_real(star) << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid backstepping/local stabilization: simulation and verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_theta = [&](CLI::App* sub) {
    sub->add_option("--theta", cfg.theta, "plant parameter theta")->capture_default_str();
  };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  };
  const auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--x0", cfg.x0, "initial state x1,x2")->capture_default_str();
    sub->add_option("--q0", cfg.q0, "initial mode (1 local, 2 global)")->capture_default_str();
    sub->add_option("--t-max", cfg.t_max, "flow horizon")->capture_default_str();
    sub->add_option("--j-max", cfg.j_max, "jump horizon")->capture_default_str();
    sub->add_option("--c-tilde-factor", cfg.c_tilde_factor, "c_tilde = factor * c_ell")
        ->capture_default_str();
    sub->add_option("--output-interval", cfg.output_interval, "sampling interval of the trace")
        ->capture_default_str();
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate the hybrid closed loop");
  add_theta(simulate_cmd);
  add_seed(simulate_cmd);
  add_sim(simulate_cmd);
  simulate_cmd->add_option("--out", cfg.out, "trace CSV path (default trace.csv)");

  auto* figures_cmd = app.add_subcommand("figures", "emit figure datasets");
  add_theta(figures_cmd);
  add_seed(figures_cmd);
  add_sim(figures_cmd);
  figures_cmd->add_option("--out", cfg.out, "output directory (default figures)");
  figures_cmd->add_option("--radius", cfg.radius, "radius of the initial circle")
      ->capture_default_str();
  figures_cmd->add_option("--count", cfg.count, "initial states on the circle")
      ->capture_default_str();
  figures_cmd->add_flag("--svg", cfg.svg, "also render SVG plots");

  auto* verify_cmd = app.add_subcommand("verify", "check the three hypotheses");
  add_theta(verify_cmd);
  add_seed(verify_cmd);
  verify_cmd->add_option("--samples", cfg.samples, "samples per check")->capture_default_str();
  verify_cmd->add_option("--out", cfg.out, "JSON report path (default stdout)");
  verify_cmd->add_flag("--theta-star", cfg.with_theta_star, "include the inclusion threshold");
  verify_cmd->add_option("--lo", cfg.lo)->capture_default_str();
  verify_cmd->add_option("--hi", cfg.hi)->capture_default_str();
  verify_cmd->add_option("--tol", cfg.tol)->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "inclusion verdict over a theta grid");
  add_seed(sweep_cmd);
  sweep_cmd->add_option("--min", cfg.sweep_min)->capture_default_str();
  sweep_cmd->add_option("--max", cfg.sweep_max)->capture_default_str();
  sweep_cmd->add_option("--step", cfg.sweep_step)->capture_default_str();
  sweep_cmd->add_option("--out", cfg.out, "CSV path (default sweep.csv)");

  auto* star_cmd = app.add_subcommand("theta-star", "bisect the inclusion threshold");
  star_cmd->add_option("--lo", cfg.lo)->capture_default_str();
  star_cmd->add_option("--hi", cfg.hi)->capture_default_str();
  star_cmd->add_option("--tol", cfg.tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out);
    if (figures_cmd->parsed()) return cmd_figures(cfg, out);
    if (verify_cmd->parsed()) return cmd_verify(cfg, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out);
    if (star_cmd->parsed()) return cmd_theta_star(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"hybrid-stab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hybrid_stab::cli
