// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/mlp.hpp"

#include <cmath>

#include "gdpp/errors.hpp"
#include "gdpp/rng.hpp"

namespace gdpp {

Tensor apply_activation(Tape& tape, Activation act, const Tensor& x) {
  switch (act) {
    case Activation::relu: return tape.relu(x);
    case Activation::tanh: return tape.tanh(x);
    case Activation::sigmoid: return tape.sigmoid(x);
    case Activation::identity: return x;
  }
  return x;
}

Mlp::Mlp(MlpSpec spec, const std::string& name_prefix) : spec_(std::move(spec)) {
  if (spec_.widths.size() < 3)
    throw ConfigError("mlp '" + name_prefix + "': need at least one hidden layer, got widths of size " +
                      std::to_string(spec_.widths.size()));
  for (int w : spec_.widths)
    if (w < 1) throw ConfigError("mlp '" + name_prefix + "': non-positive layer width");

  Rng rng(derive_seed(spec_.init_seed, 0x6d6c70 /* "mlp" */));
  for (std::size_t l = 0; l + 1 < spec_.widths.size(); ++l) {
    const int fan_in = spec_.widths[l];
    const int fan_out = spec_.widths[l + 1];
    // He-style fan-in uniform init.
    const double bound = std::sqrt(6.0 / fan_in);
    blocks_.push_back({name_prefix + ".w" + std::to_string(l),
                       rng.uniform_matrix(fan_out, fan_in, -bound, bound)});
    blocks_.push_back({name_prefix + ".b" + std::to_string(l), Tensor(fan_out, 1)});
  }
}

std::vector<Tensor> Mlp::bind(Tape& tape) const {
  std::vector<Tensor> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(tape.leaf(b.value, true));
  return out;
}

std::vector<Tensor> Mlp::constant_params() const {
  std::vector<Tensor> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.value);
  return out;
}

Mlp::Forward Mlp::forward(Tape& tape, std::span<const Tensor> params, const Tensor& x) const {
  if (params.size() != blocks_.size())
    throw ShapeError("mlp_forward", "expected " + std::to_string(blocks_.size()) +
                                        " parameter tensors, got " + std::to_string(params.size()));
  if (x.rows() != input_dim())
    throw ShapeError("mlp_forward", "input has " + std::to_string(x.rows()) +
                                        " rows, expected " + std::to_string(input_dim()));
  const int batch = x.cols();
  const Tensor ones_row = Tensor::ones(1, batch);
  const std::size_t layers = spec_.widths.size() - 1;

  Tensor h = x;
  Tensor last_hidden;
  for (std::size_t l = 0; l < layers; ++l) {
    const Tensor& w = params[2 * l];
    const Tensor& b = params[2 * l + 1];
    // Bias broadcast across columns via b * ones(1, B).
    Tensor pre = tape.add(tape.matmul(w, h), tape.matmul(b, ones_row));
    const bool is_output = (l + 1 == layers);
    h = apply_activation(tape, is_output ? spec_.output : spec_.hidden, pre);
    if (!is_output) last_hidden = h;
  }
  return {h, last_hidden};
}

Mlp::Forward Mlp::forward_pure(const Tensor& x) const {
  Tape scratch;  // nothing records: inputs are constants
  return forward(scratch, constant_params(), x);
}

std::int64_t Mlp::param_count() const {
  std::int64_t n = 0;
  for (const auto& b : blocks_) n += b.value.size();
  return n;
}

}  // namespace gdpp
