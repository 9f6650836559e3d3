// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "gdpp/tensor.hpp"

namespace gdpp {

/// Spectral-gap floor used by the eigendecomposition adjoint. Gaps smaller
/// than this are clamped (sign preserved) instead of zeroed, trading bias for
/// bounded gradients on degenerate spectra.
inline constexpr double kEigGapEpsilon = 1e-6;

/// Square matrix stored explicitly symmetrized: (K + K^T) / 2.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const Tensor& k);
  SymmetricMatrix(int n, std::vector<double> row_major);

  int order() const { return m_.rows(); }
  const Tensor& matrix() const { return m_; }
  double at(int i, int j) const { return m_.at(i, j); }

 private:
  Tensor m_;
};

/// Eigenvalues sorted descending with sign-canonical orthonormal eigenvectors
/// (column i of `vectors` pairs with `lambdas[i]`). Canonical orientation: the
/// entry of largest absolute value in each column is non-negative, earliest
/// index winning ties.
struct EigenDecomposition {
  std::vector<double> lambdas;
  Tensor vectors;

  int order() const { return vectors.rows(); }
  /// Eigenvalues clamped to [0, inf); PSD inputs may carry -1e-10-size noise.
  std::vector<double> psd_lambdas() const;
  /// V diag(lambda) V^T.
  Tensor reconstruct() const;
};

/// Symmetric eigendecomposition via Householder tridiagonalization and
/// implicit-shift QL. Deterministic for identical input bits. Throws
/// ConvergenceError (with the off-diagonal residual) if QL exceeds its
/// iteration cap, and Error on non-finite input.
EigenDecomposition sym_eig(const SymmetricMatrix& k);

/// Adjoint of sym_eig:
///   grad_K = sym( V (diag(grad_lambdas) + F o (V^T grad_vectors)) V^T ),
/// F_ij = 1 / (lambda_j - lambda_i) for i != j with the gap clamped below by
/// kEigGapEpsilon (sign preserved), F_ii = 0.
SymmetricMatrix eig_backward(const EigenDecomposition& decomp,
                             const std::vector<double>& grad_lambdas,
                             const Tensor& grad_vectors);

/// Scale every column of a D x B matrix to unit l2 norm. Columns with norm
/// below 1e-12 become e_1 (deterministic fallback).
Tensor l2_normalize_columns(const Tensor& m);

/// (x - min) / (max - min) per entry; a degenerate range (max - min < 1e-12)
/// maps to all ones so a uniform spectrum is fully weighted.
std::vector<double> minmax_normalize(const std::vector<double>& lambdas);

}  // namespace gdpp
