// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "gdpp/finite_diff.hpp"
#include "gdpp/rng.hpp"
#include "gdpp/tensor.hpp"

namespace gdpp::testing {

/// Gradient-check metric: worst absolute deviation, relative once gradients
/// exceed unit scale.
inline double grad_error(const Tensor& analytic, const Tensor& fd) {
  double scale = 1.0;
  for (std::int64_t i = 0; i < fd.size(); ++i) scale = std::max(scale, std::abs(fd[i]));
  return max_abs_diff(analytic, fd) / scale;
}

/// Independent matmul oracle: direct i-j-k sum, no shared code with the
/// library's ikj kernel.
inline Tensor naive_matmul(const Tensor& a, const Tensor& b) {
  Tensor c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (int k = 0; k < a.cols(); ++k) s += a.at(i, k) * b.at(k, j);
      c.at(i, j) = s;
    }
  return c;
}

/// Cofactor-expansion determinant (first row), for n <= 6 test oracles.
inline double cofactor_det(const Tensor& m) {
  const int n = m.rows();
  if (n == 1) return m.at(0, 0);
  double det = 0.0;
  for (int j = 0; j < n; ++j) {
    Tensor minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor.at(r - 1, cc++) = m.at(r, c);
      }
    }
    det += (j % 2 ? -1.0 : 1.0) * m.at(0, j) * cofactor_det(minor);
  }
  return det;
}

/// Random PSD matrix A^T A (+ optional diagonal shift), entries O(1).
inline Tensor random_psd(int n, Rng& rng, double shift = 0.0) {
  Tensor a = rng.gaussian_matrix(n, n);
  Tensor k = naive_matmul(transpose_pure(a), a);
  for (int i = 0; i < n; ++i) k.at(i, i) += shift;
  return k;
}

/// Random feature matrix with unit-norm columns, d x b.
inline Tensor random_unit_columns(int d, int b, Rng& rng) {
  Tensor m = rng.gaussian_matrix(d, b);
  for (int j = 0; j < b; ++j) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += m.at(i, j) * m.at(i, j);
    const double norm = std::sqrt(s);
    for (int i = 0; i < d; ++i) m.at(i, j) /= norm;
  }
  return m;
}

/// Smallest gap between adjacent sorted-descending values.
inline double min_adjacent_gap(const std::vector<double>& sorted_desc) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < sorted_desc.size(); ++i)
    gap = std::min(gap, sorted_desc[i] - sorted_desc[i + 1]);
  return gap;
}

}  // namespace gdpp::testing
