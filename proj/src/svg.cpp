#include "gupkit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gupkit/io.hpp"

namespace gupkit {

namespace {

constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 34;
constexpr int kMarginBottom = 42;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double frac(double v) const { return (v - lo) / (hi - lo); }
};

std::string num(double v) {
  // Tick labels: short fixed form is easier to read than full precision.
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

void draw_frame(std::ostringstream& out, const SvgPanel& panel, int y0,
                int plot_w, int plot_h, const Range& xr, const Range& yr,
                bool log_y) {
  const int x0 = kMarginLeft;
  out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y0 - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">" << panel.title
      << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = i / 4.0;
    const double xv = xr.lo + fx * (xr.hi - xr.lo);
    const int px = x0 + static_cast<int>(fx * plot_w);
    out << "<line x1=\"" << px << "\" y1=\"" << y0 + plot_h << "\" x2=\"" << px
        << "\" y2=\"" << y0 + plot_h + 4 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << y0 + plot_h + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(xv)
        << "</text>\n";

    const double fy = i / 4.0;
    const double yv_lin = yr.lo + fy * (yr.hi - yr.lo);
    const double yv = log_y ? std::exp(yv_lin) : yv_lin;
    const int py = y0 + plot_h - static_cast<int>(fy * plot_h);
    out << "<line x1=\"" << x0 - 4 << "\" y1=\"" << py << "\" x2=\"" << x0
        << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << x0 - 7 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << num(yv)
        << "</text>\n";
  }
  out << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y0 + plot_h + 34
      << "\" text-anchor=\"middle\" font-size=\"12\">" << panel.x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << y0 + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << y0 + plot_h / 2 << ")\">" << panel.y_label << "</text>\n";
}

}  // namespace

const std::vector<std::string>& svg_palette() {
  static const std::vector<std::string> palette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
      "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
  };
  return palette;
}

std::string render_svg(const std::vector<SvgPanel>& panels, int width,
                       int panel_height) {
  const int total_height =
      static_cast<int>(panels.size()) * (panel_height + kMarginTop + kMarginBottom);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << total_height << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const int plot_w = width - kMarginLeft - kMarginRight;
  int panel_top = 0;
  for (const auto& panel : panels) {
    const int y0 = panel_top + kMarginTop;
    Range xr, yr;
    for (const auto& s : panel.series) {
      for (double x : s.xs) xr.include(x);
      for (double y : s.ys) yr.include(panel.log_y ? std::log(y) : y);
    }
    xr.pad();
    yr.pad();
    draw_frame(out, panel, y0, plot_w, panel_height, xr, yr, panel.log_y);

    int legend_row = 0;
    for (const auto& s : panel.series) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
        const double yv = panel.log_y ? std::log(s.ys[i]) : s.ys[i];
        if (!std::isfinite(yv) || !std::isfinite(s.xs[i])) continue;
        const double px = kMarginLeft + xr.frac(s.xs[i]) * plot_w;
        const double py = y0 + panel_height - yr.frac(yv) * panel_height;
        out << fmt_double(px) << ',' << fmt_double(py) << ' ';
      }
      out << "\"/>\n";

      const int ly = y0 + 14 * legend_row++;
      out << "<line x1=\"" << kMarginLeft + plot_w + 8 << "\" y1=\"" << ly
          << "\" x2=\"" << kMarginLeft + plot_w + 28 << "\" y2=\"" << ly
          << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << kMarginLeft + plot_w + 32 << "\" y=\"" << ly + 4
          << "\" font-size=\"11\">" << s.label << "</text>\n";
    }
    panel_top += panel_height + kMarginTop + kMarginBottom;
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_scatter_svg(const std::string& title,
                               const std::string& y_label,
                               const std::vector<SvgScatterGroup>& groups,
                               int width, int height) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  Range yr;
  for (const auto& g : groups) {
    for (double v : g.values) yr.include(v);
  }
  yr.pad();

  const int plot_w = width - kMarginLeft - 24;
  const int plot_h = height - kMarginTop - kMarginBottom;
  const int y0 = kMarginTop;
  SvgPanel frame_panel{title, "", y_label, {}, false};
  Range xr;
  xr.lo = 0.0;
  xr.hi = static_cast<double>(groups.size());
  draw_frame(out, frame_panel, y0, plot_w, plot_h, xr, yr, false);

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    const double cx =
        kMarginLeft + (static_cast<double>(gi) + 0.5) / groups.size() * plot_w;
    std::vector<double> sorted = g.values;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      // spread points horizontally so equal values stay visible
      const double jitter =
          (static_cast<double>(i) - 0.5 * (g.values.size() - 1)) * 6.0;
      const double py = y0 + plot_h - yr.frac(g.values[i]) * plot_h;
      out << "<circle cx=\"" << fmt_double(cx + jitter) << "\" cy=\""
          << fmt_double(py) << "\" r=\"3.5\" fill=\"" << g.color
          << "\" fill-opacity=\"0.7\"/>\n";
    }
    if (!sorted.empty()) {
      const double median = sorted[(sorted.size() - 1) / 2];
      const double py = y0 + plot_h - yr.frac(median) * plot_h;
      out << "<line x1=\"" << fmt_double(cx - 26) << "\" y1=\""
          << fmt_double(py) << "\" x2=\"" << fmt_double(cx + 26) << "\" y2=\""
          << fmt_double(py) << "\" stroke=\"" << g.color
          << "\" stroke-width=\"2.5\"/>\n";
    }
    out << "<text x=\"" << fmt_double(cx) << "\" y=\""
        << y0 + plot_h + 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
        << g.label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gupkit
