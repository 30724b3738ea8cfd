#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lawnsim/csv.hpp"

namespace lawnsim {

enum class PlotKind { heatmap, lines };

struct plot_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Blue -> white -> red ramp over [0,1].
inline std::string ramp_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double u = t / 0.5;
    r = static_cast<int>(30 + (255 - 30) * u);
    g = static_cast<int>(60 + (255 - 60) * u);
    b = 255;
  } else {
    const double u = (t - 0.5) / 0.5;
    r = 255;
    g = static_cast<int>(255 - (255 - 60) * u);
    b = static_cast<int>(255 - (255 - 30) * u);
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

inline const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

// Renders a CSV with columns (x_m, y_m, <value>) as a gridded heatmap. Pure
// rendering: no model evaluation happens here.
inline void write_heatmap_svg(const CsvTable& t, const std::string& out_path,
                              const std::string& title) {
  const int xi = t.column_index("x_m");
  const int yi = t.column_index("y_m");
  if (xi < 0) throw plot_error("heatmap: missing column 'x_m'");
  if (yi < 0) throw plot_error("heatmap: missing column 'y_m'");
  int vi = -1;
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (static_cast<int>(c) != xi && static_cast<int>(c) != yi) {
      vi = static_cast<int>(c);
      break;
    }
  if (vi < 0) throw plot_error("heatmap: missing value column");
  if (t.rows.empty()) throw plot_error("heatmap: no data rows");

  std::set<double> xs_set, ys_set;
  for (const auto& r : t.rows) {
    xs_set.insert(r[xi]);
    ys_set.insert(r[yi]);
  }
  const std::vector<double> xs(xs_set.begin(), xs_set.end());
  const std::vector<double> ys(ys_set.begin(), ys_set.end());
  double vmin = t.rows[0][vi], vmax = vmin;
  for (const auto& r : t.rows) {
    vmin = std::min(vmin, r[vi]);
    vmax = std::max(vmax, r[vi]);
  }
  const double vspan = (vmax > vmin) ? (vmax - vmin) : 1.0;

  const double plot_w = 640.0, plot_h = 640.0, margin = 60.0;
  const double cw = plot_w / xs.size();
  const double ch = plot_h / ys.size();
  const auto x_index = [&](double x) {
    return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
  };
  const auto y_index = [&](double y) {
    return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
  };

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw plot_error("cannot open for writing: " + out_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot_w + 2 * margin
      << "\" height=\"" << plot_h + 2 * margin << "\">\n";
  out << "<text x=\"" << margin << "\" y=\"" << margin - 20 << "\" font-size=\"16\">" << title
      << "</text>\n";
  for (const auto& r : t.rows) {
    const double px = margin + x_index(r[xi]) * cw;
    // y axis points up
    const double py = margin + plot_h - (y_index(r[yi]) + 1) * ch;
    const double tval = (r[vi] - vmin) / vspan;
    out << "<rect x=\"" << detail::svg_num(px) << "\" y=\"" << detail::svg_num(py) << "\" width=\""
        << detail::svg_num(cw + 0.5) << "\" height=\"" << detail::svg_num(ch + 0.5) << "\" fill=\""
        << detail::ramp_color(tval) << "\"/>\n";
  }
  out << "<text x=\"" << margin << "\" y=\"" << plot_h + 2 * margin - 18 << "\" font-size=\"12\">x_m "
      << detail::svg_num(xs.front()) << " .. " << detail::svg_num(xs.back()) << ", y_m "
      << detail::svg_num(ys.front()) << " .. " << detail::svg_num(ys.back()) << ", "
      << t.columns[vi] << " " << detail::svg_num(vmin) << " .. " << detail::svg_num(vmax)
      << "</text>\n";
  out << "</svg>\n";
}

// Renders a CSV as line series: first column is the x axis, every remaining
// column one polyline.
inline void write_lines_svg(const CsvTable& t, const std::string& out_path,
                            const std::string& title) {
  if (t.columns.size() < 2) throw plot_error("lines: need an x column plus at least one series");
  if (t.rows.empty()) throw plot_error("lines: no data rows");

  double xmin = t.rows[0][0], xmax = xmin;
  double ymin = t.rows[0][1], ymax = ymin;
  for (const auto& r : t.rows) {
    xmin = std::min(xmin, r[0]);
    xmax = std::max(xmax, r[0]);
    for (std::size_t c = 1; c < r.size(); ++c) {
      ymin = std::min(ymin, r[c]);
      ymax = std::max(ymax, r[c]);
    }
  }
  const double xspan = (xmax > xmin) ? xmax - xmin : 1.0;
  const double yspan = (ymax > ymin) ? ymax - ymin : 1.0;

  const double plot_w = 640.0, plot_h = 420.0, margin = 60.0;
  const auto px = [&](double x) { return margin + (x - xmin) / xspan * plot_w; };
  const auto py = [&](double y) { return margin + plot_h - (y - ymin) / yspan * plot_h; };

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw plot_error("cannot open for writing: " + out_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot_w + 2 * margin
      << "\" height=\"" << plot_h + 2 * margin << "\">\n";
  out << "<text x=\"" << margin << "\" y=\"" << margin - 20 << "\" font-size=\"16\">" << title
      << "</text>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(c - 1)
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (i) out << ' ';
      out << detail::svg_num(px(t.rows[i][0])) << ',' << detail::svg_num(py(t.rows[i][c]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << plot_w + margin + 4 << "\" y=\"" << margin + 16.0 * c
        << "\" font-size=\"12\" fill=\"" << detail::series_color(c - 1) << "\">" << t.columns[c]
        << "</text>\n";
  }
  out << "<text x=\"" << margin << "\" y=\"" << plot_h + 2 * margin - 18 << "\" font-size=\"12\">"
      << t.columns[0] << " " << detail::svg_num(xmin) << " .. " << detail::svg_num(xmax)
      << "</text>\n";
  out << "</svg>\n";
}

// CSV -> vector-graphics file. Re-rendering the same CSV is byte-identical.
inline void emit_plotdata(const std::string& csv_path, PlotKind kind,
                          const std::string& out_path) {
  const CsvTable t = read_csv(csv_path);
  if (t.rows.empty()) throw plot_error("empty CSV: " + csv_path);
  std::string title = csv_path;
  const auto slash = title.find_last_of('/');
  if (slash != std::string::npos) title = title.substr(slash + 1);
  if (kind == PlotKind::heatmap)
    write_heatmap_svg(t, out_path, title);
  else
    write_lines_svg(t, out_path, title);
}

}  // namespace lawnsim
