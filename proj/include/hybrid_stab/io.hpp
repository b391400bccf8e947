#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hybrid_stab/hybrid_sim.hpp"
#include "hybrid_stab/verification.hpp"

namespace hybrid_stab::io {

inline constexpr std::string_view kTraceHeader = "t,j,q,x1,x2,u,V_ell,V_1";
inline constexpr std::string_view kSweepHeader = "theta,h3_pass,maxA,c_ell";
inline constexpr std::string_view kFigureVellHeader = "t,j,V_ell";
inline constexpr std::string_view kFigureComponentsHeader = "t,j,x1,x2,q";
inline constexpr std::string_view kFigurePhaseHeader = "trajectory,t,j,x1,x2";
inline constexpr std::string_view kSetAHeader = "x1,x2";

/// Shortest decimal form that round-trips (17 significant digits).
std::string format_real(double v);

void write_trace_csv(std::ostream& out, const SolutionTrace& trace);

nlohmann::json to_json(const HypothesisReport& report);

struct SweepRow {
  double theta;
  bool valid;  // theta < theta1, c_ell defined
  bool h3_pass;
  double max_a;
  double c_ell;
};

std::vector<SweepRow> sweep_inclusion(double min, double max, double step);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Figure datasets: V_ell and (x1, x2, q) over time for `main`, phase-plane
/// polylines for `ball`, and the attractor polyline.
struct FigureFiles {
  std::filesystem::path v_ell;
  std::filesystem::path components;
  std::filesystem::path phase;
  std::filesystem::path set_a;
  std::vector<std::filesystem::path> svg;
};

FigureFiles write_figures(const std::filesystem::path& dir, const SolutionTrace& main,
                          const std::vector<SolutionTrace>& ball, const SetA& set_a,
                          bool svg);

}  // namespace hybrid_stab::io
