#pragma once

#include <string>
#include <vector>

namespace mixate::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal line chart; axes start at zero.
std::string line_chart_svg(const std::vector<Series>& series,
                           const std::string& title, const std::string& xlabel,
                           const std::string& ylabel);

}  // namespace mixate::cli
