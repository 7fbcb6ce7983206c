#pragma once

#include <string>
#include <vector>

namespace alice {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 720;
  int height = 440;
};

/// Renders a standalone SVG line chart. Non-finite points (and non-positive
/// ones on a log axis) break the polyline.
std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace alice
