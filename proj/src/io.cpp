#include "hybrid_stab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hybrid_stab::io {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const SolutionTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& p : trace.points) {
    out << format_real(p.t) << ',' << p.j << ',' << static_cast<int>(p.q) << ','
        << format_real(p.x(0)) << ',' << format_real(p.x(p.x.size() - 1)) << ','
        << format_real(p.u) << ',' << format_real(p.v_ell) << ',' << format_real(p.v_1) << '\n';
  }
}

nlohmann::json to_json(const HypothesisReport& r) {
  const auto cond = [](const ConditionResult& c) {
    return nlohmann::json{{"pass", c.pass}, {"margin", c.margin}};
  };
  nlohmann::json j;
  j["theta"] = r.theta;
  j["h1"] = {{"pass", r.h1.pass}, {"margin", r.h1.margin}, {"samples", r.h1.samples}};
  j["h2"] = {{"a", cond(r.h2.a)}, {"b", cond(r.h2.b)}, {"c", cond(r.h2.c)}, {"d", cond(r.h2.d)}};
  j["h3"] = {{"pass", r.h3.pass}, {"maxA", r.h3.max_a}, {"c_ell", r.h3.c_ell}};
  if (r.theta_star) j["theta_star"] = *r.theta_star;
  j["seed"] = r.seed;
  return j;
}

std::vector<SweepRow> sweep_inclusion(double min, double max, double step) {
  if (!(min > 0.0 && max >= min && step > 0.0)) {
    throw std::invalid_argument("sweep needs 0 < min <= max and step > 0");
  }
  std::vector<SweepRow> rows;
  const auto n = static_cast<long long>(std::floor((max - min) / step + 1e-9));
  for (long long i = 0; i <= n; ++i) {
    const double theta = min + static_cast<double>(i) * step;
    const InclusionMaximum m = max_v_on_A(theta);
    if (theta < theta1()) {
      const double c = c_local(theta);
      rows.push_back({theta, true, m.value < c, m.value, c});
    } else {
      rows.push_back({theta, false, false, m.value, std::numeric_limits<double>::quiet_NaN()});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format_real(r.theta) << ',' << (r.valid ? (r.h3_pass ? "1" : "0") : "invalid") << ','
        << format_real(r.max_a) << ',' << (r.valid ? format_real(r.c_ell) : "nan") << '\n';
  }
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return f;
}

struct Series {
  std::vector<std::pair<double, double>> xy;
  std::string color;
};

// Minimal self-contained SVG line plot.
void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_label, const std::string& y_label,
               const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.xy) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  constexpr double w = 640, h = 420, pad = 50;
  const auto sx = [&](double x) { return pad + (x - x0) / (x1 - x0) * (w - 2 * pad); };
  const auto sy = [&](double y) { return h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad); };

  auto f = open_out(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad << "\" height=\""
    << h - 2 * pad << "\" fill=\"none\" stroke=\"black\"/>\n";
  f << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  f << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << x_label
    << "</text>\n";
  f << "<text x=\"12\" y=\"" << h / 2 << "\" transform=\"rotate(-90 12 " << h / 2
    << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  f << "<text x=\"" << pad << "\" y=\"" << h - pad + 15 << "\">" << format_real(x0) << "</text>\n";
  f << "<text x=\"" << w - pad << "\" y=\"" << h - pad + 15 << "\" text-anchor=\"end\">"
    << format_real(x1) << "</text>\n";
  f << "<text x=\"" << pad - 4 << "\" y=\"" << h - pad << "\" text-anchor=\"end\">"
    << format_real(y0) << "</text>\n";
  f << "<text x=\"" << pad - 4 << "\" y=\"" << pad + 10 << "\" text-anchor=\"end\">"
    << format_real(y1) << "</text>\n";
  for (const auto& s : series) {
    f << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
    for (const auto& [x, y] : s.xy) f << sx(x) << ',' << sy(y) << ' ';
    f << "\"/>\n";
  }
  f << "</svg>\n";
}

}  // namespace

FigureFiles write_figures(const std::filesystem::path& dir, const SolutionTrace& main,
                          const std::vector<SolutionTrace>& ball, const SetA& set_a, bool svg) {
  std::filesystem::create_directories(dir);
  FigureFiles files{dir / "fig1_v_ell.csv", dir / "fig2_components.csv", dir / "fig3_phase.csv",
                    dir / "fig3_set_a.csv", {}};

  {
    auto f = open_out(files.v_ell);
    f << kFigureVellHeader << '\n';
    for (const auto& p : main.points) {
      f << format_real(p.t) << ',' << p.j << ',' << format_real(p.v_ell) << '\n';
    }
  }
  {
    auto f = open_out(files.components);
    f << kFigureComponentsHeader << '\n';
    for (const auto& p : main.points) {
      f << format_real(p.t) << ',' << p.j << ',' << format_real(p.x(0)) << ','
        << format_real(p.x(1)) << ',' << static_cast<int>(p.q) << '\n';
    }
  }
  {
    auto f = open_out(files.phase);
    f << kFigurePhaseHeader << '\n';
    for (std::size_t i = 0; i < ball.size(); ++i) {
      for (const auto& p : ball[i].points) {
        f << i << ',' << format_real(p.t) << ',' << p.j << ',' << format_real(p.x(0)) << ','
          << format_real(p.x(1)) << '\n';
      }
    }
  }
  const auto curve = set_a.polyline(101);
  {
    auto f = open_out(files.set_a);
    f << kSetAHeader << '\n';
    for (const auto& x : curve) f << format_real(x(0)) << ',' << format_real(x(1)) << '\n';
  }

  if (svg) {
    const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    Series v{{}, palette[0]};
    Series x1{{}, palette[0]}, x2{{}, palette[1]}, q{{}, palette[2]};
    for (const auto& p : main.points) {
      v.xy.emplace_back(p.t, p.v_ell);
      x1.xy.emplace_back(p.t, p.x(0));
      x2.xy.emplace_back(p.t, p.x(1));
      q.xy.emplace_back(p.t, static_cast<double>(p.q));
    }
    files.svg.push_back(dir / "fig1_v_ell.svg");
    write_svg(files.svg.back(), "V_ell along the solution", "t", "V_ell", {v});
    files.svg.push_back(dir / "fig2_components.svg");
    write_svg(files.svg.back(), "x1 (blue), x2 (orange), q (green)", "t", "value", {x1, x2, q});

    std::vector<Series> phase;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      Series s{{}, palette[i % 6]};
      for (const auto& p : ball[i].points) s.xy.emplace_back(p.x(0), p.x(1));
      phase.push_back(std::move(s));
    }
    Series a{{}, "black"};
    for (const auto& x : curve) a.xy.emplace_back(x(0), x(1));
    phase.push_back(std::move(a));
    files.svg.push_back(dir / "fig3_phase.svg");
    write_svg(files.svg.back(), "Trajectories from the radius-2 circle (A in black)", "x1", "x2",
              phase);
  }
  return files;
}

}  // namespace hybrid_stab::io
