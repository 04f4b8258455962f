#pragma once

#include <string>
#include <vector>

namespace kpp {

/// One named curve for a chart. y values that are non-finite (or non-positive
/// on a log axis) break the polyline instead of corrupting it.
struct Curve {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Curve> curves;
};

/// Render one chart as a standalone SVG document. Output is deterministic:
/// fixed 800x500 viewport, coordinates printed with %.6g, no timestamps or
/// environment-dependent content.
std::string svg_chart(const ChartSpec& spec);

/// Stack several charts vertically into one SVG document (shared width).
std::string svg_panels(const std::vector<ChartSpec>& specs);

}  // namespace kpp
