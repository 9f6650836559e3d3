// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "gdpp/tensor.hpp"

namespace gdpp {

/// Central-difference gradient oracle: (f(x + h e_i) - f(x - h e_i)) / (2h)
/// per coordinate. `f` must be deterministic; the caller owns the step size
/// (h = 0 is a caller error, not checked here). Independent of the tape by
/// construction: it only evaluates `f`.
inline Tensor finite_diff_gradient(const std::function<double(const Tensor&)>& f,
                                   const Tensor& x, double h) {
  Tensor g(x.rows(), x.cols());
  Tensor probe = x;
  for (std::int64_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double fp = f(probe);
    probe[i] = orig - h;
    const double fm = f(probe);
    probe[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace gdpp
