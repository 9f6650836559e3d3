// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gdpp/tensor.hpp"

namespace gdpp {

/// Scatter plot of true data (green) and generated data (blue) for 2D
/// benchmarks. One <circle> element per sample; deterministic output with the
/// manifest hash embedded as an XML comment.
std::string scatter_svg(const Tensor& real_points, const Tensor& fake_points,
                        const std::string& title, const std::string& manifest_hash);

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Simple line plot (one polyline per series) with axis labels.
std::string line_plot_svg(const std::vector<LineSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& manifest_hash);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gdpp
