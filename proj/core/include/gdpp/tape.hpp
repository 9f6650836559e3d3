// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gdpp/tensor.hpp"

namespace gdpp {

/// Gradients of a scalar loss with respect to the requires-grad leaves of one
/// backward pass, keyed by tape node id.
class GradientMap {
 public:
  bool contains(const Tensor& leaf) const;
  /// Gradient for a requires-grad leaf; throws TapeError if absent.
  const Tensor& grad(const Tensor& leaf) const;
  /// Gradient for a leaf, or a zero tensor of its shape when absent.
  Tensor get_or_zero(const Tensor& leaf) const;
  std::size_t size() const { return by_node_.size(); }

 private:
  friend class Tape;
  std::unordered_map<int, Tensor> by_node_;
};

/// Define-by-run reverse-mode tape over Tensor. A tape is rebuilt for every
/// forward pass and consumed by a single backward pass. Ops record a node only
/// when at least one input lives on the tape; otherwise they constant-fold,
/// so the same code path doubles as a pure evaluator.
///
/// A tape and its tensors belong to one thread; independent tapes in
/// independent threads do not share state.
class Tape {
 public:
  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Register a gradient leaf. With requires_grad=false the tensor stays a
  /// constant (it never receives a gradient).
  Tensor leaf(const Tensor& t, bool requires_grad = true);

  Tensor matmul(const Tensor& a, const Tensor& b);
  Tensor transpose(const Tensor& a);

  // Elementwise; one operand may be a 1x1 scalar broadcast over the other.
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);
  Tensor div(const Tensor& a, const Tensor& b);

  Tensor add_scalar(const Tensor& a, double s);
  Tensor mul_scalar(const Tensor& a, double s);

  Tensor relu(const Tensor& a);
  Tensor tanh(const Tensor& a);
  Tensor sigmoid(const Tensor& a);
  Tensor exp(const Tensor& a);
  Tensor log(const Tensor& a);

  Tensor sum(const Tensor& a);
  Tensor mean(const Tensor& a);

  /// Rows [r0, r1) / columns [c0, c1).
  Tensor slice_rows(const Tensor& a, int r0, int r1);
  Tensor slice_cols(const Tensor& a, int c0, int c1);
  Tensor concat_rows(const Tensor& a, const Tensor& b);
  Tensor concat_cols(const Tensor& a, const Tensor& b);

  /// Frobenius norm over all entries (vector l2 norm for vectors) -> scalar.
  Tensor l2_norm(const Tensor& a);
  /// Sum of elementwise products of two same-shape tensors -> scalar.
  Tensor dot(const Tensor& a, const Tensor& b);

  /// Extension point for ops with a hand-written adjoint (eigendecomposition,
  /// column normalization, eigenvalue products). `value` is the forward
  /// result; `vjp` maps the gradient of `value` to the gradient of `input`.
  Tensor custom(const char* op, const Tensor& input, Tensor value,
                std::function<Tensor(const Tensor& grad_out)> vjp);

  /// Reverse pass from a scalar loss recorded on this tape. May be called
  /// once per tape; a second call is a stale-tape error.
  GradientMap backward(const Tensor& loss);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    const char* op;
    int a = -1;
    int b = -1;
    int rows = 0;
    int cols = 0;
    bool grad_leaf = false;
    std::function<void(Tape&, std::span<const double>)> back;
  };

  Tensor record(const char* op, int ia, int ib, Tensor value, bool grad_leaf,
                std::function<void(Tape&, std::span<const double>)> back);
  void accumulate(int node, std::span<const double> g);
  int input_id(const Tensor& t, const char* op) const;

  // Elementwise binary with optional scalar broadcast.
  enum class BinOp { add, sub, mul, div };
  Tensor binary(const char* name, BinOp op, const Tensor& a, const Tensor& b);
  // Elementwise unary; dfdy: derivative expressed from (x, y).
  Tensor unary(const char* name, const Tensor& a,
               double (*fwd)(double), double (*dfdxy)(double x, double y));

  std::vector<Node> nodes_;
  std::vector<std::vector<double>> grads_;
  bool consumed_ = false;
  int serial_ = 0;
};

}  // namespace gdpp
