#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace posenc::cli {

struct Series {
  std::string name;
  std::vector<double> values;  // one per category
};

/// Line chart of each series over the categories on a [0, 1] y axis.
std::string line_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                           const std::vector<Series>& series);

/// Confusion matrix heat grid, rows = truth, columns = prediction.
std::string heat_grid_svg(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<std::vector<std::size_t>>& counts);

std::string xml_escape(const std::string& s);

}  // namespace posenc::cli
