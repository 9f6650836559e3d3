// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gdpp/errors.hpp"

namespace gdpp {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 640;
constexpr int kMargin = 48;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
  double map(double v, double px_lo, double px_hi) const {
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

void svg_header(std::ostringstream& out, const std::string& title,
                const std::string& manifest_hash) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<!-- manifest " << manifest_hash << " -->\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

}  // namespace

std::string scatter_svg(const Tensor& real_points, const Tensor& fake_points,
                        const std::string& title, const std::string& manifest_hash) {
  if (real_points.cols() != 2 || fake_points.cols() != 2)
    throw ShapeError("scatter_svg", "points must be n x 2");

  Range rx, ry;
  for (int i = 0; i < real_points.rows(); ++i) {
    rx.include(real_points.at(i, 0));
    ry.include(real_points.at(i, 1));
  }
  for (int i = 0; i < fake_points.rows(); ++i) {
    rx.include(fake_points.at(i, 0));
    ry.include(fake_points.at(i, 1));
  }
  rx.pad();
  ry.pad();

  std::ostringstream out;
  svg_header(out, title, manifest_hash);
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#888888\"/>\n";

  auto emit_points = [&](const Tensor& pts, const char* color, const char* cls) {
    for (int i = 0; i < pts.rows(); ++i) {
      const double px = rx.map(pts.at(i, 0), kMargin, kWidth - kMargin);
      const double py = ry.map(pts.at(i, 1), kHeight - kMargin, kMargin);  // y up
      out << "<circle class=\"" << cls << "\" cx=\"" << num(px) << "\" cy=\"" << num(py)
          << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
    }
  };
  emit_points(real_points, "#2ca02c", "real");
  emit_points(fake_points, "#1f77b4", "fake");
  out << "</svg>\n";
  return out.str();
}

std::string line_plot_svg(const std::vector<LineSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& manifest_hash) {
  Range rx, ry;
  for (const auto& s : series) {
    for (double v : s.x) rx.include(v);
    for (double v : s.y) ry.include(v);
  }
  rx.pad();
  ry.pad();

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  svg_header(out, title, manifest_hash);
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#888888\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 14 " << kHeight / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ls = series[s];
    const char* color = kColors[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ls.x.size(); ++i) {
      if (i) out << " ";
      out << num(rx.map(ls.x[i], kMargin, kWidth - kMargin)) << ","
          << num(ry.map(ls.y[i], kHeight - kMargin, kMargin));
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\"" << kMargin + 16 + 16 * s
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << color << "\">" << ls.label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_text_file: cannot write " + path);
  out << content;
}

}  // namespace gdpp
