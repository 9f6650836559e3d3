// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gdpp/mlp.hpp"
#include "gdpp/tape.hpp"

namespace gdpp {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Standard bias-corrected Adam over named parameter blocks. Rejects
/// non-finite gradients by naming the offending block (no silent clipping).
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  const AdamConfig& config() const { return cfg_; }
  std::int64_t steps() const { return t_; }

  /// Update `blocks` in place from the gradients of their bound leaf handles.
  void step(std::vector<ParamBlock>& blocks, std::span<const Tensor> leaves,
            const GradientMap& grads);

  /// Single-tensor update (used by inference-via-optimization on z).
  void step_one(Tensor& value, const Tensor& grad, const std::string& name = "z");

 private:
  void ensure_state(std::size_t blocks);
  void apply(std::size_t i, Tensor& value, const Tensor& grad, const std::string& name);

  AdamConfig cfg_;
  std::int64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace gdpp
