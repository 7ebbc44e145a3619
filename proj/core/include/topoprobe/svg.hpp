#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace topo {

// One scatter series; markers: 0 = circle, 1 = square, 2 = triangle.
struct SvgSeries {
  std::string name;
  std::vector<double> x, y;
  std::vector<double> size;  // optional per-point radius scale, else default
  int marker = 0;
  std::string color = "#1f77b4";
};

struct SvgOptions {
  int width = 640;
  int height = 480;
  std::string x_label, y_label, title;
  bool diagonal = false;   // y = x reference line
  double hline = std::numeric_limits<double>::quiet_NaN();  // dashed horizontal line
  std::string hline_label;
  bool equal_axes = false;
};

// Dependency-free scatter plot. Output is deterministic for fixed input.
void write_scatter_svg(std::ostream& os, const std::vector<SvgSeries>& series,
                       const SvgOptions& options);

}  // namespace topo
