// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/tensor.hpp"

#include <cmath>

namespace gdpp {

std::size_t Tensor::numel(int rows, int cols) {
  if (rows < 0 || cols < 0) throw ShapeError("tensor", "negative dimension");
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

Tensor::Tensor(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), v_(std::move(values)) {
  if (v_.size() != numel(rows, cols))
    throw ShapeError("tensor", "value count " + std::to_string(v_.size()) +
                                   " does not match shape " + std::to_string(rows) +
                                   "x" + std::to_string(cols));
}

Tensor Tensor::scalar(double v) { return Tensor(1, 1, {v}); }

Tensor Tensor::ones(int rows, int cols) {
  Tensor t(rows, cols);
  for (auto& x : t.v_) x = 1.0;
  return t;
}

Tensor Tensor::identity(int n) {
  Tensor t(n, n);
  for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Tensor t(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c)
      throw ShapeError("tensor", "ragged initializer rows");
    int j = 0;
    for (double v : row) t.at(i, j++) = v;
    ++i;
  }
  return t;
}

Tensor Tensor::col(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return Tensor(n, 1, std::move(values));
}

Tensor Tensor::row(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return Tensor(1, n, std::move(values));
}

double Tensor::scalar_value() const {
  if (!is_scalar())
    throw ShapeError("scalar_value", "tensor is " + std::to_string(rows_) + "x" +
                                         std::to_string(cols_) + ", expected 1x1");
  return v_[0];
}

Tensor Tensor::detached() const {
  Tensor t = *this;
  t.requires_grad_ = false;
  t.node_.reset();
  return t;
}

bool Tensor::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

void matmul_into(std::span<const double> a, int ar, int ac,
                 std::span<const double> b, int br, int bc, std::span<double> c) {
  (void)br;
  for (int i = 0; i < ar; ++i) {
    double* ci = c.data() + static_cast<std::size_t>(i) * bc;
    for (int j = 0; j < bc; ++j) ci[j] = 0.0;
    const double* ai = a.data() + static_cast<std::size_t>(i) * ac;
    for (int k = 0; k < ac; ++k) {
      const double aik = ai[k];
      const double* bk = b.data() + static_cast<std::size_t>(k) * bc;
      for (int j = 0; j < bc; ++j) ci[j] += aik * bk[j];
    }
  }
}

Tensor matmul_pure(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  Tensor c(a.rows(), b.cols());
  matmul_into(a.values(), a.rows(), a.cols(), b.values(), b.rows(), b.cols(),
              c.mutable_values());
  return c;
}

Tensor transpose_pure(const Tensor& a) {
  Tensor t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  return t;
}

double dot_pure(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw ShapeError("dot", a.rows(), a.cols(), b.rows(), b.cols());
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double frobenius_norm(const Tensor& a) {
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b))
    throw ShapeError("max_abs_diff", a.rows(), a.cols(), b.rows(), b.cols());
  double m = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace gdpp
