#pragma once

#include <string>
#include <utility>
#include <vector>

namespace walshflow {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

// Static SVG: axes with min/max ticks, one polyline and marker set per series.
std::string svg_line_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace walshflow
