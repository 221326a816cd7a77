#pragma once

#include <string>
#include <vector>

namespace subcov::svg {

/// %.17g, the format shared by CSV and SVG output.
std::string format_number(double x);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Line chart with axes, ticks, a legend and one polyline per series. Each
/// polyline carries the exact data as data-x / data-y attributes.
std::string render(const Chart& chart);

}  // namespace subcov::svg
