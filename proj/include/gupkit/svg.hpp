#pragma once

#include <string>
#include <vector>

namespace gupkit {

/// Hand-emitted line charts: polylines, axes, tick labels, legend. Enough
/// for diagnostic figures without a plotting dependency; output is
/// deterministic for identical inputs.
struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct SvgPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  bool log_y = false;
};

/// Render panels stacked vertically into one SVG document.
std::string render_svg(const std::vector<SvgPanel>& panels, int width = 860,
                       int panel_height = 320);

/// Scatter variant: one column of points per group plus a median tick.
struct SvgScatterGroup {
  std::string label;
  std::string color;
  std::vector<double> values;
};

std::string render_scatter_svg(const std::string& title,
                               const std::string& y_label,
                               const std::vector<SvgScatterGroup>& groups,
                               int width = 520, int height = 360);

const std::vector<std::string>& svg_palette();

}  // namespace gupkit
