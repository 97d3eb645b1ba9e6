// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mcflow/io.hpp"

namespace mcf {

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
};

/// Chart coordinates of the polyline, the same numbers the SVG carries.
std::vector<std::pair<double, double>> plot_points(const PlotSeries& series);

/// Self-contained SVG line chart of `quantity` against t. Throws a
/// validation error for an unknown column.
std::string render_plot(const CsvTable& table, std::string_view quantity);

}  // namespace mcf
