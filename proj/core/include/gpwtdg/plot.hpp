#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace gpwtdg {

struct PlotSeries {
  std::string label;
  std::vector<std::array<double, 2>> points;  // (x, y), positive values
};

struct PlotOptions {
  std::string title;
  std::string x_label = "C/h";
  std::string y_label = "relative L2 error";
  int width = 760;
  int height = 560;
  /// Dotted guide lines with slopes error ~ x^{-order}.
  std::vector<int> reference_orders = {2, 3, 4, 5};
};

/// Log-log scatter/line plot as a standalone SVG document.
void write_loglog_svg(std::ostream& out, const std::vector<PlotSeries>& series,
                      const PlotOptions& options = {});

}  // namespace gpwtdg
