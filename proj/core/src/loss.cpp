// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/loss.hpp"

#include <cmath>

#include "gdpp/errors.hpp"

namespace gdpp {

std::string to_string(GdppVariant v) {
  switch (v) {
    case GdppVariant::full: return "full";
    case GdppVariant::magnitude_only: return "magnitude";
    case GdppVariant::structure_only: return "structure";
    case GdppVariant::unnormalized_structure: return "unnorm";
    case GdppVariant::exact_determinant: return "det";
  }
  return "full";
}

std::optional<GdppVariant> gdpp_variant_from_string(const std::string& name) {
  if (name == "full") return GdppVariant::full;
  if (name == "magnitude" || name == "magnitude_only") return GdppVariant::magnitude_only;
  if (name == "structure" || name == "structure_only") return GdppVariant::structure_only;
  if (name == "unnorm" || name == "unnormalized_structure")
    return GdppVariant::unnormalized_structure;
  if (name == "det" || name == "exact_determinant") return GdppVariant::exact_determinant;
  return std::nullopt;
}

FeatureBatch extract_features(Tape& tape, const Tensor& activations, Origin origin) {
  if (origin == Origin::real)
    return FeatureBatch{l2_normalize_columns(activations.detached()), Origin::real};
  return FeatureBatch{l2_normalize_columns_on_tape(tape, activations), Origin::fake};
}

Tensor build_kernel(Tape& tape, const FeatureBatch& f) {
  if (f.batch() == 0) throw ShapeError("build_kernel", "empty feature batch");
  Tensor m = tape.matmul(tape.transpose(f.mat), f.mat);
  return tape.mul_scalar(tape.add(m, tape.transpose(m)), 0.5);
}

TapeEig sym_eig_on_tape(Tape& tape, const Tensor& kernel) {
  EigenDecomposition decomp = sym_eig(SymmetricMatrix(kernel));
  const int n = decomp.order();

  // One node carries [lambda | V] so the adjoint can combine both gradient
  // streams in a single eig_backward call; the outputs are tape slices.
  Tensor packed(n, n + 1);
  for (int i = 0; i < n; ++i) {
    packed.at(i, 0) = decomp.lambdas[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) packed.at(i, j + 1) = decomp.vectors.at(i, j);
  }
  Tensor node = tape.custom(
      "sym_eig", kernel, std::move(packed),
      [decomp](const Tensor& g) {
        const int n = decomp.order();
        std::vector<double> grad_lambdas(static_cast<std::size_t>(n));
        Tensor grad_vectors(n, n);
        for (int i = 0; i < n; ++i) {
          grad_lambdas[static_cast<std::size_t>(i)] = g.at(i, 0);
          for (int j = 0; j < n; ++j) grad_vectors.at(i, j) = g.at(i, j + 1);
        }
        return eig_backward(decomp, grad_lambdas, grad_vectors).matrix();
      });

  TapeEig out;
  out.lambdas = tape.slice_cols(node, 0, 1);
  out.vectors = tape.slice_cols(node, 1, n + 1);
  out.decomp = std::move(decomp);
  return out;
}

Tensor l2_normalize_columns_on_tape(Tape& tape, const Tensor& m) {
  Tensor normalized = l2_normalize_columns(m);
  const int rows = m.rows(), cols = m.cols();
  std::vector<double> norms(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += m.at(i, j) * m.at(i, j);
    norms[static_cast<std::size_t>(j)] = std::sqrt(s);
  }
  Tensor y = normalized;  // saved forward values for the adjoint
  return tape.custom(
      "l2_normalize_columns", m, std::move(normalized),
      [rows, cols, norms = std::move(norms), y = std::move(y)](const Tensor& g) {
        // y = x / ||x||  =>  gin = (g - y (y . g)) / ||x|| per column.
        Tensor gin(rows, cols);
        for (int j = 0; j < cols; ++j) {
          const double norm = norms[static_cast<std::size_t>(j)];
          if (norm < 1e-12) continue;  // fallback column: constant e_1, zero grad
          double yg = 0.0;
          for (int i = 0; i < rows; ++i) yg += y.at(i, j) * g.at(i, j);
          for (int i = 0; i < rows; ++i)
            gin.at(i, j) = (g.at(i, j) - y.at(i, j) * yg) / norm;
        }
        return gin;
      });
}

Tensor product_on_tape(Tape& tape, const Tensor& v) {
  if (v.cols() != 1) throw ShapeError("product", "expected a column vector");
  const int n = v.rows();
  double prod = 1.0;
  for (int i = 0; i < n; ++i) prod *= v[i];
  Tensor saved = v.detached();
  return tape.custom("product", v, Tensor::scalar(prod),
                     [n, saved = std::move(saved)](const Tensor& g) {
                       // d(prod)/dv_i = prod_{j != i} v_j, via prefix/suffix
                       // products so zero entries stay exact.
                       std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 1.0);
                       std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 1.0);
                       for (int i = 0; i < n; ++i)
                         prefix[static_cast<std::size_t>(i) + 1] =
                             prefix[static_cast<std::size_t>(i)] * saved[i];
                       for (int i = n - 1; i >= 0; --i)
                         suffix[static_cast<std::size_t>(i)] =
                             suffix[static_cast<std::size_t>(i) + 1] * saved[i];
                       Tensor gin(n, 1);
                       for (int i = 0; i < n; ++i)
                         gin[i] = g.scalar_value() * prefix[static_cast<std::size_t>(i)] *
                                  suffix[static_cast<std::size_t>(i) + 1];
                       return gin;
                     });
}

namespace {

Tensor abs_on_tape(Tape& tape, const Tensor& x) {
  return tape.add(tape.relu(x), tape.relu(tape.mul_scalar(x, -1.0)));
}

// -sum_i w_i cos(v_real^i, v_fake^i); eigenvectors are unit-norm so the
// cosine is the plain dot product, computed for all columns at once as the
// column sums of V_real o V_fake.
Tensor structure_term(Tape& tape, const Tensor& v_real, const Tensor& v_fake,
                      const std::vector<double>& weights, bool abs_cosine) {
  const int n = v_real.rows();
  Tensor cosines = tape.matmul(Tensor::ones(1, n), tape.mul(v_real, v_fake));
  if (abs_cosine) cosines = abs_on_tape(tape, cosines);
  Tensor w = Tensor::row(std::vector<double>(weights.begin(), weights.end()));
  return tape.mul_scalar(tape.dot(w, cosines), -1.0);
}

}  // namespace

Tensor gdpp_loss(Tape& tape, const FeatureBatch& real, const FeatureBatch& fake,
                 GdppVariant variant, const GdppOptions& options) {
  if (real.batch() != fake.batch())
    throw ShapeError("gdpp_loss", "batch sizes differ: real " + std::to_string(real.batch()) +
                                      ", fake " + std::to_string(fake.batch()));
  if (real.mat.on_tape())
    throw TapeError("gdpp_loss: real feature batch must be detached from the tape");

  Tensor k_fake = build_kernel(tape, fake);
  TapeEig eig_fake = sym_eig_on_tape(tape, k_fake);
  for (double l : eig_fake.decomp.lambdas)
    if (!std::isfinite(l)) throw Error("gdpp_loss: non-finite fake eigenvalues");

  if (variant == GdppVariant::exact_determinant) {
    Tensor det = product_on_tape(tape, eig_fake.lambdas);
    return tape.mul_scalar(tape.log(tape.add_scalar(det, kDetEpsilon)), -1.0);
  }

  FeatureBatch real_const{real.mat.detached(), Origin::real};
  Tensor k_real = build_kernel(tape, real_const);
  EigenDecomposition eig_real = sym_eig(SymmetricMatrix(k_real));
  for (double l : eig_real.lambdas)
    if (!std::isfinite(l)) throw Error("gdpp_loss: non-finite real eigenvalues");

  const std::vector<double> real_psd = eig_real.psd_lambdas();
  Tensor lambda_real = Tensor::col(std::vector<double>(eig_real.lambdas.begin(),
                                                       eig_real.lambdas.end()));

  Tensor magnitude;
  if (variant != GdppVariant::structure_only) {
    Tensor diff = tape.sub(lambda_real, eig_fake.lambdas);
    magnitude = options.magnitude_mse ? tape.mean(tape.mul(diff, diff))
                                      : tape.sum(abs_on_tape(tape, diff));
  }

  switch (variant) {
    case GdppVariant::magnitude_only:
      return magnitude;
    case GdppVariant::structure_only:
      return structure_term(tape, eig_real.vectors, eig_fake.vectors,
                            minmax_normalize(real_psd), options.abs_cosine);
    case GdppVariant::unnormalized_structure:
      return tape.add(magnitude, structure_term(tape, eig_real.vectors, eig_fake.vectors,
                                                real_psd, options.abs_cosine));
    case GdppVariant::full:
    default:
      return tape.add(magnitude, structure_term(tape, eig_real.vectors, eig_fake.vectors,
                                                minmax_normalize(real_psd),
                                                options.abs_cosine));
  }
}

}  // namespace gdpp
