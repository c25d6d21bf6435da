#pragma once

#include <string>
#include <vector>

namespace cdrlab::report {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<double> markers;  // x positions drawn as dotted vertical lines
  bool log_x = false;
  int width = 800;
  int height = 480;
};

// Standalone SVG document; non-finite points are skipped.
std::string render_svg(const LineChart& chart);

std::string xml_escape(const std::string& s);

}  // namespace cdrlab::report
