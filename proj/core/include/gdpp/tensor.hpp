// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "gdpp/errors.hpp"

namespace gdpp {

/// Dense row-major matrix of 64-bit reals. Vectors are n x 1 (or 1 x n),
/// scalars are 1 x 1. A tensor may carry a tape handle (`node`) when it was
/// produced by or registered with a Tape; plain tensors are constants.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rows, int cols) : rows_(rows), cols_(cols), v_(numel(rows, cols), 0.0) {}
  Tensor(int rows, int cols, std::vector<double> values);

  static Tensor scalar(double v);
  static Tensor zeros(int rows, int cols) { return Tensor(rows, cols); }
  static Tensor ones(int rows, int cols);
  static Tensor identity(int n);
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Column vector from values.
  static Tensor col(std::vector<double> values);
  /// Row vector from values.
  static Tensor row(std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }
  bool empty() const { return v_.empty(); }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }
  bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& at(int r, int c) { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
  double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }

  std::span<const double> values() const { return v_; }
  std::vector<double>& mutable_values() { return v_; }
  double scalar_value() const;

  bool requires_grad() const { return requires_grad_; }
  std::optional<int> node() const { return node_; }
  bool on_tape() const { return node_.has_value(); }
  /// Copy without tape handle or gradient flag.
  Tensor detached() const;

  bool all_finite() const;

 private:
  friend class Tape;
  static std::size_t numel(int rows, int cols);

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> v_;
  bool requires_grad_ = false;
  std::optional<int> node_;
  int tape_serial_ = -1;
};

// Pure (tape-free) helpers shared by the solver, metrics, and tests.

/// C = A * B with a cache-friendly ikj loop.
Tensor matmul_pure(const Tensor& a, const Tensor& b);
void matmul_into(std::span<const double> a, int ar, int ac,
                 std::span<const double> b, int br, int bc, std::span<double> c);
Tensor transpose_pure(const Tensor& a);
double dot_pure(const Tensor& a, const Tensor& b);
double frobenius_norm(const Tensor& a);
/// max |a - b| over elements; shapes must match.
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace gdpp
