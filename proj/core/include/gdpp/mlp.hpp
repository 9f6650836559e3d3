// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdpp/tape.hpp"
#include "gdpp/tensor.hpp"

namespace gdpp {

enum class Activation { relu, tanh, sigmoid, identity };

struct MlpSpec {
  /// Layer widths including input and output: {in, h1, ..., out}.
  std::vector<int> widths;
  Activation hidden = Activation::relu;
  Activation output = Activation::identity;
  std::uint64_t init_seed = 0;
};

struct ParamBlock {
  std::string name;
  Tensor value;
};

/// Fully connected net over column batches (layer maps d_in x B -> d_out x B).
/// The pre-output hidden activations are exposed as the feature tap.
class Mlp {
 public:
  explicit Mlp(MlpSpec spec, const std::string& name_prefix = "mlp");

  struct Forward {
    Tensor output;
    Tensor last_hidden;  // post-activation values of the final hidden layer
  };

  /// Register every parameter as a gradient leaf; handles align with blocks().
  std::vector<Tensor> bind(Tape& tape) const;
  /// Parameter values as plain constants (frozen / pure evaluation).
  std::vector<Tensor> constant_params() const;

  /// Forward pass with explicit parameters (from bind() or constant_params()).
  Forward forward(Tape& tape, std::span<const Tensor> params, const Tensor& x) const;
  /// Pure forward with the stored parameter values.
  Forward forward_pure(const Tensor& x) const;

  const MlpSpec& spec() const { return spec_; }
  int input_dim() const { return spec_.widths.front(); }
  int output_dim() const { return spec_.widths.back(); }
  int feature_dim() const { return spec_.widths[spec_.widths.size() - 2]; }

  std::vector<ParamBlock>& blocks() { return blocks_; }
  const std::vector<ParamBlock>& blocks() const { return blocks_; }
  std::int64_t param_count() const;

 private:
  MlpSpec spec_;
  std::vector<ParamBlock> blocks_;  // w0, b0, w1, b1, ...
};

Tensor apply_activation(Tape& tape, Activation act, const Tensor& x);

}  // namespace gdpp
