// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace nnfc::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::string x_label = "time [s]";
  std::string y_label;
  std::vector<Series> series;
};

/// Renders side-by-side panels as one standalone SVG document.
std::string renderFigure(const std::vector<Panel>& panels);

void writeFigure(const std::string& path, const std::vector<Panel>& panels);

inline constexpr const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace nnfc::plot
