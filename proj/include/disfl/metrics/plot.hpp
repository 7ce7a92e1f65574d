// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "disfl/metrics/prf.hpp"
#include "disfl/training/history.hpp"

namespace disfl {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  // Optional per-point annotations (same length as points, or empty).
  std::vector<std::string> point_labels;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<Series> series;
};

/// Standalone SVG line/scatter chart with axes, ticks and a legend.
std::string render_svg(const PlotSpec& spec);

/// Model size (MiB, log axis) against F1, one point per report, annotated
/// with the report's config label.
PlotSpec size_vs_f1(std::span<const EvalReport> reports);

/// Best dev F1 of each run against the silver percentage it used. Runs
/// without silver mixing count as 0%.
PlotSpec silver_pct_vs_f1(std::span<const History> runs, const std::string& label = "dev F1");

}  // namespace disfl
