// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gdpp/errors.hpp"

namespace gdpp {

namespace {

constexpr int kQlMaxIterations = 50;

// Householder reduction of the symmetric matrix in `a` (row-major, destroyed)
// to tridiagonal form: d = diagonal, e = off-diagonal (e[0] = 0). `zt` receives
// the accumulated orthogonal transform with row j holding column j of Q, so the
// QL rotations later run over contiguous memory.
void tred2(std::vector<double>& a, int n, std::vector<double>& d,
           std::vector<double>& e, std::vector<double>& zt) {
  std::vector<double> hs(static_cast<std::size_t>(n), 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(a[static_cast<std::size_t>(i) * n + k]);
      if (scale == 0.0) {
        e[i] = a[static_cast<std::size_t>(i) * n + l];
      } else {
        for (int k = 0; k <= l; ++k) {
          a[static_cast<std::size_t>(i) * n + k] /= scale;
          h += a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(i) * n + k];
        }
        double f = a[static_cast<std::size_t>(i) * n + l];
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a[static_cast<std::size_t>(i) * n + l] = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          a[static_cast<std::size_t>(j) * n + i] = a[static_cast<std::size_t>(i) * n + j] / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k)
            g += a[static_cast<std::size_t>(j) * n + k] * a[static_cast<std::size_t>(i) * n + k];
          for (int k = j + 1; k <= l; ++k)
            g += a[static_cast<std::size_t>(k) * n + j] * a[static_cast<std::size_t>(i) * n + k];
          e[j] = g / h;
          f += e[j] * a[static_cast<std::size_t>(i) * n + j];
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a[static_cast<std::size_t>(i) * n + j];
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k)
            a[static_cast<std::size_t>(j) * n + k] -=
                f * e[k] + g * a[static_cast<std::size_t>(i) * n + k];
        }
      }
    } else {
      e[i] = a[static_cast<std::size_t>(i) * n + l];
    }
    hs[static_cast<std::size_t>(i)] = h;
  }
  e[0] = 0.0;

  // Accumulate Q (transposed layout). The Householder vector u_i lives in
  // row i of `a`; u_i / H lives in column i. Both inner loops below run over
  // contiguous rows of zt.
  std::fill(zt.begin(), zt.end(), 0.0);
  for (int i = 0; i < n; ++i) zt[static_cast<std::size_t>(i) * n + i] = 1.0;
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) {
    if (hs[static_cast<std::size_t>(i)] == 0.0) continue;
    const double* u = &a[static_cast<std::size_t>(i) * n];
    for (int k = 0; k < i; ++k) w[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k) * n + i];
    for (int j = 0; j < i; ++j) {
      double* ztj = &zt[static_cast<std::size_t>(j) * n];
      double g = 0.0;
      for (int k = 0; k < i; ++k) g += u[k] * ztj[k];
      for (int k = 0; k < i; ++k) ztj[k] -= g * w[static_cast<std::size_t>(k)];
    }
  }
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i) * n + i];
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the rows of zt in
// step. Eigenvalue i ends in d[i] with its eigenvector in row i of zt.
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& zt, int n) {
  for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = e[static_cast<std::size_t>(i)];
  e[static_cast<std::size_t>(n - 1)] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[static_cast<std::size_t>(m)]) +
                          std::abs(d[static_cast<std::size_t>(m + 1)]);
        if (std::abs(e[static_cast<std::size_t>(m)]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kQlMaxIterations)
          throw ConvergenceError("sym_eig: QL iteration cap exceeded",
                                 std::abs(e[static_cast<std::size_t>(l)]));
        double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                   (2.0 * e[static_cast<std::size_t>(l)]);
        double r = std::hypot(g, 1.0);
        g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
            e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[static_cast<std::size_t>(i)];
          const double b = c * e[static_cast<std::size_t>(i)];
          r = std::hypot(f, g);
          e[static_cast<std::size_t>(i + 1)] = r;
          if (r == 0.0) {
            d[static_cast<std::size_t>(i + 1)] -= p;
            e[static_cast<std::size_t>(m)] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[static_cast<std::size_t>(i + 1)] - p;
          r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
          p = s * r;
          d[static_cast<std::size_t>(i + 1)] = g + p;
          g = c * r - b;
          double* zi = &zt[static_cast<std::size_t>(i) * n];
          double* zi1 = &zt[static_cast<std::size_t>(i + 1) * n];
          for (int k = 0; k < n; ++k) {
            f = zi1[k];
            zi1[k] = s * zi[k] + c * f;
            zi[k] = c * zi[k] - s * f;
          }
        }
        if (underflow) continue;
        d[static_cast<std::size_t>(l)] -= p;
        e[static_cast<std::size_t>(l)] = g;
        e[static_cast<std::size_t>(m)] = 0.0;
      }
    } while (m != l);
  }
}

void canonicalize_sign(double* v, int n) {
  int arg = 0;
  double best = std::abs(v[0]);
  for (int k = 1; k < n; ++k) {
    const double a = std::abs(v[k]);
    if (a > best) {  // strict: ties keep the lowest index
      best = a;
      arg = k;
    }
  }
  if (v[arg] < 0.0)
    for (int k = 0; k < n; ++k) v[k] = -v[k];
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Tensor& k) : m_(k.rows(), k.cols()) {
  if (k.rows() != k.cols() || k.rows() < 1)
    throw ShapeError("symmetric_matrix", "matrix must be square and non-empty, got " +
                                             std::to_string(k.rows()) + "x" +
                                             std::to_string(k.cols()));
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j) m_.at(i, j) = 0.5 * (k.at(i, j) + k.at(j, i));
}

SymmetricMatrix::SymmetricMatrix(int n, std::vector<double> row_major)
    : SymmetricMatrix(Tensor(n, n, std::move(row_major))) {}

std::vector<double> EigenDecomposition::psd_lambdas() const {
  std::vector<double> out(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = std::max(lambdas[i], 0.0);
  return out;
}

Tensor EigenDecomposition::reconstruct() const {
  const int n = order();
  Tensor scaled(n, n);  // V diag(lambda)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scaled.at(i, j) = vectors.at(i, j) * lambdas[static_cast<std::size_t>(j)];
  return matmul_pure(scaled, transpose_pure(vectors));
}

EigenDecomposition sym_eig(const SymmetricMatrix& k) {
  const int n = k.order();
  if (!k.matrix().all_finite()) throw Error("sym_eig: non-finite entries in input");

  EigenDecomposition out;
  out.lambdas.resize(static_cast<std::size_t>(n));
  out.vectors = Tensor(n, n);
  if (n == 1) {
    out.lambdas[0] = k.at(0, 0);
    out.vectors.at(0, 0) = 1.0;
    return out;
  }

  std::vector<double> a(k.matrix().values().begin(), k.matrix().values().end());
  std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n));
  std::vector<double> zt(static_cast<std::size_t>(n) * n);
  tred2(a, n, d, e, zt);
  tql2(d, e, zt, n);

  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int x, int y) { return d[static_cast<std::size_t>(x)] > d[static_cast<std::size_t>(y)]; });

  for (int j = 0; j < n; ++j) {
    double* row = &zt[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]) * n];
    canonicalize_sign(row, n);
    out.lambdas[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    for (int i = 0; i < n; ++i) out.vectors.at(i, j) = row[i];
  }
  return out;
}

SymmetricMatrix eig_backward(const EigenDecomposition& decomp,
                             const std::vector<double>& grad_lambdas,
                             const Tensor& grad_vectors) {
  const int n = decomp.order();
  if (static_cast<int>(grad_lambdas.size()) != n)
    throw ShapeError("eig_backward", "grad_lambdas has " +
                                         std::to_string(grad_lambdas.size()) +
                                         " entries, expected " + std::to_string(n));
  if (grad_vectors.rows() != n || grad_vectors.cols() != n)
    throw ShapeError("eig_backward", n, n, grad_vectors.rows(), grad_vectors.cols());

  const Tensor& v = decomp.vectors;
  Tensor inner = matmul_pure(transpose_pure(v), grad_vectors);  // V^T grad_V
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        inner.at(i, j) = grad_lambdas[static_cast<std::size_t>(i)];
        continue;
      }
      double gap = decomp.lambdas[static_cast<std::size_t>(j)] -
                   decomp.lambdas[static_cast<std::size_t>(i)];
      if (std::abs(gap) < kEigGapEpsilon) gap = std::copysign(kEigGapEpsilon, gap);
      inner.at(i, j) /= gap;
    }
  }
  Tensor grad = matmul_pure(matmul_pure(v, inner), transpose_pure(v));
  return SymmetricMatrix(grad);  // constructor symmetrizes
}

Tensor l2_normalize_columns(const Tensor& m) {
  Tensor out(m.rows(), m.cols());
  for (int j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i) s += m.at(i, j) * m.at(i, j);
    const double norm = std::sqrt(s);
    if (norm < 1e-12) {
      out.at(0, j) = 1.0;
      for (int i = 1; i < m.rows(); ++i) out.at(i, j) = 0.0;
    } else {
      for (int i = 0; i < m.rows(); ++i) out.at(i, j) = m.at(i, j) / norm;
    }
  }
  return out;
}

std::vector<double> minmax_normalize(const std::vector<double>& lambdas) {
  const auto [mn, mx] = std::minmax_element(lambdas.begin(), lambdas.end());
  const double range = *mx - *mn;
  std::vector<double> out(lambdas.size());
  if (range < 1e-12) {
    std::fill(out.begin(), out.end(), 1.0);
    return out;
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = (lambdas[i] - *mn) / range;
  return out;
}

}  // namespace gdpp
