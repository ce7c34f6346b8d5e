// Minimal static SVG writers for the report plots (grouped bars and lines).
#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dosa::svg {

inline const char* kPalette[] = {"#4878cf", "#d65f5f", "#6acc65",
                                 "#b47cc7", "#c4ad66", "#77bedb"};

struct Series {
  std::string name;
  std::vector<double> values;  // one per group / x position
};

namespace detail {

inline double max_value(const std::vector<Series>& series) {
  double m = 0.0;
  for (const auto& s : series)
    for (double v : s.values) m = std::max(m, v);
  return m <= 0.0 ? 1.0 : m;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

}  // namespace detail

// Grouped bar chart: one cluster per group label, one bar per series.
inline void bar_chart(const std::string& path, const std::string& title,
                      const std::vector<std::string>& groups,
                      const std::vector<Series>& series) {
  if (series.empty()) throw std::invalid_argument("bar_chart: no series");
  const double W = 720, H = 420, ml = 60, mr = 20, mt = 40, mb = 60;
  const double plot_w = W - ml - mr, plot_h = H - mt - mb;
  const double vmax = detail::max_value(series) * 1.1;
  const double group_w = plot_w / static_cast<double>(groups.size());
  const double bar_w = group_w * 0.8 / static_cast<double>(series.size());

  std::ofstream out(path);
  if (!out) throw std::runtime_error("bar_chart: cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
      << "' height='" << H << "'>\n";
  out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' "
         "font-family='sans-serif' font-size='15'>"
      << title << "</text>\n";
  // axes
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << mt + plot_h << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt + plot_h << "' x2='" << ml + plot_w
      << "' y2='" << mt + plot_h << "' stroke='black'/>\n";
  for (int tick = 0; tick <= 5; ++tick) {
    const double v = vmax * tick / 5.0;
    const double y = mt + plot_h - plot_h * tick / 5.0;
    out << "<text x='" << ml - 6 << "' y='" << y + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='10'>"
        << detail::fmt(v) << "</text>\n";
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double gx = ml + group_w * (static_cast<double>(g) + 0.1);
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = g < series[s].values.size() ? series[s].values[g] : 0.0;
      const double h = plot_h * v / vmax;
      out << "<rect x='" << gx + bar_w * static_cast<double>(s) << "' y='"
          << mt + plot_h - h << "' width='" << bar_w * 0.95 << "' height='"
          << h << "' fill='" << kPalette[s % 6] << "'/>\n";
    }
    out << "<text x='" << ml + group_w * (static_cast<double>(g) + 0.5)
        << "' y='" << mt + plot_h + 16
        << "' text-anchor='middle' font-family='sans-serif' font-size='10'>"
        << groups[g] << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double lx = ml + 10 + 130.0 * static_cast<double>(s);
    out << "<rect x='" << lx << "' y='" << H - 24 << "' width='12' height='12' fill='"
        << kPalette[s % 6] << "'/>\n";
    out << "<text x='" << lx + 16 << "' y='" << H - 14
        << "' font-family='sans-serif' font-size='11'>" << series[s].name
        << "</text>\n";
  }
  out << "</svg>\n";
}

// Line chart over shared numeric x positions.
inline void line_chart(const std::string& path, const std::string& title,
                       const std::vector<double>& xs,
                       const std::vector<Series>& series) {
  if (series.empty() || xs.empty())
    throw std::invalid_argument("line_chart: empty input");
  const double W = 720, H = 420, ml = 60, mr = 20, mt = 40, mb = 60;
  const double plot_w = W - ml - mr, plot_h = H - mt - mb;
  const double vmax = detail::max_value(series) * 1.1;
  const double xmin = *std::min_element(xs.begin(), xs.end());
  const double xmax = *std::max_element(xs.begin(), xs.end());
  const double xspan = xmax - xmin == 0.0 ? 1.0 : xmax - xmin;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("line_chart: cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
      << "' height='" << H << "'>\n";
  out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' "
         "font-family='sans-serif' font-size='15'>"
      << title << "</text>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << mt + plot_h << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt + plot_h << "' x2='"
      << ml + plot_w << "' y2='" << mt + plot_h << "' stroke='black'/>\n";
  auto px = [&](double x) { return ml + plot_w * (x - xmin) / xspan; };
  auto py = [&](double v) { return mt + plot_h - plot_h * v / vmax; };
  for (double x : xs)
    out << "<text x='" << px(x) << "' y='" << mt + plot_h + 16
        << "' text-anchor='middle' font-family='sans-serif' font-size='10'>"
        << detail::fmt(x) << "</text>\n";
  for (int tick = 0; tick <= 5; ++tick) {
    const double v = vmax * tick / 5.0;
    out << "<text x='" << ml - 6 << "' y='" << py(v) + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='10'>"
        << detail::fmt(v) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill='none' stroke='" << kPalette[s % 6]
        << "' stroke-width='2' points='";
    for (std::size_t i = 0; i < xs.size() && i < series[s].values.size(); ++i)
      out << px(xs[i]) << "," << py(series[s].values[i]) << " ";
    out << "'/>\n";
    const double lx = ml + 10 + 150.0 * static_cast<double>(s);
    out << "<rect x='" << lx << "' y='" << H - 24
        << "' width='12' height='12' fill='" << kPalette[s % 6] << "'/>\n";
    out << "<text x='" << lx + 16 << "' y='" << H - 14
        << "' font-family='sans-serif' font-size='11'>" << series[s].name
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace dosa::svg
