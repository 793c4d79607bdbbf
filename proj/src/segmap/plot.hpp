// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "segmap/metrics.hpp"

namespace segmap {

struct PlotOptions {
  std::string title;
  std::string y_label;
  int width = 720;
  int height = 420;
};

/// Static SVG line chart; one polyline per named series.
std::string line_plot_svg(const std::vector<std::pair<std::string, YearSeries>>& series, const PlotOptions& opt = {});

}  // namespace segmap
