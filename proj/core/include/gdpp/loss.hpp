// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "gdpp/eig.hpp"
#include "gdpp/tape.hpp"
#include "gdpp/tensor.hpp"

namespace gdpp {

/// Additive floor inside the log of the determinant loss variant; keeps
/// rank-deficient fake kernels (D < B) away from -log 0.
inline constexpr double kDetEpsilon = 1e-6;

enum class Origin { real, fake };

/// D x B feature matrix with unit-norm columns, the source of a DPP kernel.
/// Real-tagged batches are gradient constants; fake-tagged batches may live
/// on a tape so the loss can differentiate through them.
struct FeatureBatch {
  Tensor mat;
  Origin origin = Origin::real;

  int dims() const { return mat.rows(); }
  int batch() const { return mat.cols(); }
};

enum class GdppVariant {
  full,
  magnitude_only,
  structure_only,
  unnormalized_structure,
  exact_determinant,
};

std::string to_string(GdppVariant v);
/// Accepts full|magnitude|structure|unnorm|det (and the long enum names).
std::optional<GdppVariant> gdpp_variant_from_string(const std::string& name);

struct GdppOptions {
  /// Match eigenvalues with mean-squared error instead of the summed absolute
  /// difference (the default).
  bool magnitude_mse = false;
  /// Weight |cos| instead of cos in the structure term.
  bool abs_cosine = false;
};

/// Column-normalize raw activations into a feature batch. Real-tagged output
/// is detached (gradient-constant); fake-tagged output keeps its tape handle
/// and normalization happens through a differentiable node.
FeatureBatch extract_features(Tape& tape, const Tensor& activations, Origin origin);

/// K = phi^T phi, explicitly symmetrized, on the tape when `f` is. Unit
/// columns give unit diagonal; quality terms are fixed at 1.
Tensor build_kernel(Tape& tape, const FeatureBatch& f);

/// Eigendecomposition recorded as a differentiable tape node.
struct TapeEig {
  Tensor lambdas;  // n x 1, descending
  Tensor vectors;  // n x n, sign-canonical columns
  EigenDecomposition decomp;
};
TapeEig sym_eig_on_tape(Tape& tape, const Tensor& kernel);

/// Differentiable column normalization (unit l2 per column, e_1 fallback for
/// norms under 1e-12; fallback columns get zero gradient).
Tensor l2_normalize_columns_on_tape(Tape& tape, const Tensor& m);

/// Product of the entries of a column vector, with the exact per-entry
/// adjoint; used for det(K) = prod(lambda).
Tensor product_on_tape(Tape& tape, const Tensor& v);

/// The diversity loss between a constant real batch and a (possibly on-tape)
/// fake batch. Gradients flow only into the fake features.
Tensor gdpp_loss(Tape& tape, const FeatureBatch& real, const FeatureBatch& fake,
                 GdppVariant variant, const GdppOptions& options = {});

}  // namespace gdpp
