#pragma once

// Minimal static SVG scatter plots.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace cli {

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Eigen::Vector2d> points;    // grey dots
  std::vector<Eigen::Vector2d> markers;   // red, drawn on top
  std::vector<Eigen::Vector2d> outline;   // blue polyline
  bool close_outline = false;
};

void write_svg(const std::string& path, const Plot& plot);

}  // namespace cli
