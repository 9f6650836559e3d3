// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/adam.hpp"

#include <cmath>

#include "gdpp/errors.hpp"

namespace gdpp {

void Adam::ensure_state(std::size_t blocks) {
  if (m_.size() < blocks) {
    m_.resize(blocks);
    v_.resize(blocks);
  }
}

void Adam::apply(std::size_t i, Tensor& value, const Tensor& grad, const std::string& name) {
  if (!grad.same_shape(value))
    throw OptimError(name, "gradient shape " + std::to_string(grad.rows()) + "x" +
                               std::to_string(grad.cols()) + " does not match parameter " +
                               std::to_string(value.rows()) + "x" + std::to_string(value.cols()));
  if (!grad.all_finite()) throw OptimError(name, "non-finite gradient");

  Tensor& m = m_[i];
  Tensor& v = v_[i];
  if (m.size() != value.size()) {
    m = Tensor(value.rows(), value.cols());
    v = Tensor(value.rows(), value.cols());
  }
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::int64_t k = 0; k < value.size(); ++k) {
    const double g = grad[k];
    m[k] = b1 * m[k] + (1.0 - b1) * g;
    v[k] = b2 * v[k] + (1.0 - b2) * g * g;
    const double mhat = m[k] / bc1;
    const double vhat = v[k] / bc2;
    value[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
  }
}

void Adam::step(std::vector<ParamBlock>& blocks, std::span<const Tensor> leaves,
                const GradientMap& grads) {
  if (leaves.size() != blocks.size())
    throw OptimError("step", "leaf handle count " + std::to_string(leaves.size()) +
                                 " does not match block count " + std::to_string(blocks.size()));
  ensure_state(blocks.size());
  ++t_;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    apply(i, blocks[i].value, grads.get_or_zero(leaves[i]), blocks[i].name);
}

void Adam::step_one(Tensor& value, const Tensor& grad, const std::string& name) {
  ensure_state(1);
  ++t_;
  apply(0, value, grad, name);
}

}  // namespace gdpp
