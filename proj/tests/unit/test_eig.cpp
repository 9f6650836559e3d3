// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>

#include "gdpp/eig.hpp"
#include "gdpp/finite_diff.hpp"
#include "gdpp/rng.hpp"
#include "helpers.hpp"

using namespace gdpp;
using namespace gdpp::testing;

namespace {

double orthonormality_error(const Tensor& v) {
  Tensor vtv = matmul_pure(transpose_pure(v), v);
  Tensor identity = Tensor::identity(v.rows());
  double s = 0.0;
  for (std::int64_t i = 0; i < vtv.size(); ++i) {
    const double d = vtv[i] - identity[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double reconstruction_error(const EigenDecomposition& e, const Tensor& k) {
  Tensor r = e.reconstruct();
  double s = 0.0;
  for (std::int64_t i = 0; i < r.size(); ++i) {
    const double d = r[i] - k[i];
    s += d * d;
  }
  return std::sqrt(s) / std::max(1.0, frobenius_norm(k));
}

}  // namespace

TEST_CASE("diagonal input: eigenvalues are the diagonal, vectors the identity") {
  EigenDecomposition e = sym_eig(SymmetricMatrix(Tensor::from_rows({{3, 0}, {0, 1}})));
  CHECK(e.lambdas[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.lambdas[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs_diff(e.vectors, Tensor::identity(2)) < 1e-14);
}

TEST_CASE("closed-form 2x2: [[2,1],[1,2]]") {
  EigenDecomposition e = sym_eig(SymmetricMatrix(Tensor::from_rows({{2, 1}, {1, 2}})));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(e.lambdas[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.lambdas[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.vectors.at(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(e.vectors.at(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(e.vectors.at(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(e.vectors.at(1, 1) == doctest::Approx(-inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("rank bound: Gram matrix of 8 samples with 3 features has exactly 5 null eigenvalues") {
  Rng rng(101);
  Tensor a = rng.gaussian_matrix(8, 3);             // 8 samples, 3 features
  Tensor k = naive_matmul(a, transpose_pure(a));    // phi^T phi with phi = A^T
  EigenDecomposition e = sym_eig(SymmetricMatrix(k));
  int null_count = 0;
  for (double l : e.lambdas)
    if (std::abs(l) < 1e-10) ++null_count;
  CHECK(null_count == 5);
}

TEST_CASE("round trip and orthonormality on random PSD matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + rng.uniform_int(32);
    Tensor k = random_psd(n, rng);
    EigenDecomposition e = sym_eig(SymmetricMatrix(k));
    CHECK(reconstruction_error(e, SymmetricMatrix(k).matrix()) <= 1e-8);
    CHECK(orthonormality_error(e.vectors) <= 1e-8);
    for (std::size_t i = 0; i + 1 < e.lambdas.size(); ++i)
      CHECK(e.lambdas[i] >= e.lambdas[i + 1]);  // non-increasing
    for (double l : e.lambdas) CHECK(l >= -1e-10);
    for (double l : e.psd_lambdas()) CHECK(l >= 0.0);
  }
}

TEST_CASE("eigenvalue product matches the cofactor determinant for n <= 6") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + rng.uniform_int(6);
    Tensor k = random_psd(n, rng, 0.5);
    EigenDecomposition e = sym_eig(SymmetricMatrix(k));
    double prod = 1.0;
    for (double l : e.lambdas) prod *= l;
    const double det = cofactor_det(SymmetricMatrix(k).matrix());
    CHECK(std::abs(prod - det) <= 1e-9 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("unit-column Gram kernels: trace equals B, eigenvalues in [0, B]") {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + rng.uniform_int(7);
    const int b = 2 + rng.uniform_int(7);
    Tensor phi = random_unit_columns(d, b, rng);
    Tensor k = naive_matmul(transpose_pure(phi), phi);
    double trace = 0.0;
    for (int i = 0; i < b; ++i) trace += k.at(i, i);
    CHECK(std::abs(trace - b) <= 1e-12);

    EigenDecomposition e = sym_eig(SymmetricMatrix(k));
    double sum = 0.0;
    for (double l : e.lambdas) {
      sum += l;
      CHECK(l >= -1e-10);
      CHECK(l <= b + 1e-8);
    }
    CHECK(sum == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("sign canonicalization: dominant entry non-negative in every column") {
  Rng rng(23);
  Tensor k = random_psd(6, rng);
  EigenDecomposition e = sym_eig(SymmetricMatrix(k));
  for (int j = 0; j < 6; ++j) {
    double best = 0.0;
    int arg = 0;
    for (int i = 0; i < 6; ++i) {
      if (std::abs(e.vectors.at(i, j)) > best) {
        best = std::abs(e.vectors.at(i, j));
        arg = i;
      }
    }
    CHECK(e.vectors.at(arg, j) >= 0.0);
  }
}

TEST_CASE("sym_eig is deterministic for identical input bits") {
  Rng rng(29);
  Tensor k = random_psd(16, rng);
  EigenDecomposition a = sym_eig(SymmetricMatrix(k));
  EigenDecomposition b = sym_eig(SymmetricMatrix(k));
  CHECK(max_abs_diff(a.vectors, b.vectors) == 0.0);
  for (std::size_t i = 0; i < a.lambdas.size(); ++i) CHECK(a.lambdas[i] == b.lambdas[i]);
}

TEST_CASE("sym_eig rejects non-finite input") {
  Tensor k = Tensor::identity(3);
  k.at(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sym_eig(SymmetricMatrix(k)), Error);
}

TEST_CASE("eig_backward with a unit eigenvalue gradient gives v v^T") {
  Rng rng(31);
  Tensor k = random_psd(4, rng, 0.3);
  EigenDecomposition e = sym_eig(SymmetricMatrix(k));
  for (int i = 0; i < 4; ++i) {
    std::vector<double> gl(4, 0.0);
    gl[static_cast<std::size_t>(i)] = 1.0;
    SymmetricMatrix grad = eig_backward(e, gl, Tensor(4, 4));
    Tensor expected(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) expected.at(r, c) = e.vectors.at(r, i) * e.vectors.at(c, i);
    CHECK(max_abs_diff(grad.matrix(), expected) < 1e-12);
  }
}

TEST_CASE("eig_backward matches finite differences for lambda_max") {
  Rng rng(37);
  int done = 0;
  while (done < 5) {
    Tensor k = random_psd(4, rng, 0.2);
    EigenDecomposition e = sym_eig(SymmetricMatrix(k));
    if (min_adjacent_gap(e.lambdas) < 0.1) continue;  // non-degenerate cases only
    ++done;

    std::vector<double> gl(4, 0.0);
    gl[0] = 1.0;
    Tensor analytic = eig_backward(e, gl, Tensor(4, 4)).matrix();
    Tensor fd = finite_diff_gradient(
        [](const Tensor& m) { return sym_eig(SymmetricMatrix(m)).lambdas[0]; }, k, 1e-5);
    CHECK(grad_error(analytic, fd) <= 1e-5);
  }
}

TEST_CASE("eig_backward matches finite differences for v1 . c") {
  Rng rng(41);
  Tensor c = random_unit_columns(3, 1, rng);
  int done = 0;
  while (done < 5) {
    Tensor k = random_psd(3, rng, 0.2);
    EigenDecomposition e = sym_eig(SymmetricMatrix(k));
    if (min_adjacent_gap(e.lambdas) < 0.1) continue;
    // Keep the canonical-sign pivot stable under the finite-difference probes.
    double top = 0.0, second = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double a = std::abs(e.vectors.at(i, 0));
      if (a > top) {
        second = top;
        top = a;
      } else if (a > second) {
        second = a;
      }
    }
    if (top - second < 0.05) continue;
    ++done;

    Tensor gv(3, 3);
    for (int i = 0; i < 3; ++i) gv.at(i, 0) = c[i];
    Tensor analytic = eig_backward(e, std::vector<double>(3, 0.0), gv).matrix();
    Tensor fd = finite_diff_gradient(
        [&](const Tensor& m) {
          EigenDecomposition d = sym_eig(SymmetricMatrix(m));
          double s = 0.0;
          for (int i = 0; i < 3; ++i) s += d.vectors.at(i, 0) * c[i];
          return s;
        },
        k, 1e-5);
    CHECK(grad_error(analytic, fd) <= 1e-4);
  }
}

TEST_CASE("eig_backward validates dimensions") {
  Rng rng(43);
  EigenDecomposition e = sym_eig(SymmetricMatrix(random_psd(3, rng)));
  CHECK_THROWS_AS(eig_backward(e, std::vector<double>(2, 0.0), Tensor(3, 3)), ShapeError);
  CHECK_THROWS_AS(eig_backward(e, std::vector<double>(3, 0.0), Tensor(2, 3)), ShapeError);
}

TEST_CASE("l2_normalize_columns") {
  SUBCASE("(3,4) scales to (0.6, 0.8)") {
    Tensor m = Tensor::from_rows({{3.0}, {4.0}});
    Tensor n = l2_normalize_columns(m);
    CHECK(n.at(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(n.at(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("already-unit columns are unchanged to 1e-15") {
    Rng rng(47);
    Tensor m = random_unit_columns(5, 4, rng);
    CHECK(max_abs_diff(l2_normalize_columns(m), m) <= 1e-15);
  }
  SUBCASE("zero columns fall back to e1") {
    Tensor m(3, 2);
    m.at(0, 1) = 2.0;
    Tensor n = l2_normalize_columns(m);
    CHECK(n.at(0, 0) == 1.0);
    CHECK(n.at(1, 0) == 0.0);
    CHECK(n.at(2, 0) == 0.0);
    CHECK(n.at(0, 1) == 1.0);
  }
}

TEST_CASE("minmax_normalize") {
  CHECK(minmax_normalize({3, 1, 0}) == std::vector<double>{1.0, 1.0 / 3.0, 0.0});
  CHECK(minmax_normalize({2, 2, 2}) == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(minmax_normalize({5, 4, 1, 1}) == std::vector<double>{1.0, 0.75, 0.0, 0.0});
}
