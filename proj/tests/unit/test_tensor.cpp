// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "gdpp/tensor.hpp"
#include "gdpp/rng.hpp"
#include "helpers.hpp"

using namespace gdpp;

TEST_CASE("tensor shape and value invariants") {
  Tensor t(3, 4);
  CHECK(t.size() == 12);
  CHECK(t.rows() == 3);
  CHECK(t.cols() == 4);
  CHECK_THROWS_AS(Tensor(2, 2, {1.0, 2.0, 3.0}), ShapeError);

  Tensor s = Tensor::scalar(2.5);
  CHECK(s.is_scalar());
  CHECK(s.scalar_value() == 2.5);
  CHECK_THROWS_AS(t.scalar_value(), ShapeError);
}

TEST_CASE("matmul kernel matches the naive triple-loop oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + rng.uniform_int(7);
    const int k = 1 + rng.uniform_int(7);
    const int n = 1 + rng.uniform_int(7);
    Tensor a = rng.gaussian_matrix(m, k);
    Tensor b = rng.gaussian_matrix(k, n);
    CHECK(max_abs_diff(matmul_pure(a, b), testing::naive_matmul(a, b)) < 1e-12);
  }
}

TEST_CASE("matmul rejects incompatible shapes, naming both") {
  Tensor a(3, 4), b(5, 2);
  try {
    matmul_pure(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("matmul") != std::string::npos);
    CHECK(msg.find("3x4") != std::string::npos);
    CHECK(msg.find("5x2") != std::string::npos);
  }
}

TEST_CASE("transpose round trip") {
  Rng rng(7);
  Tensor a = rng.gaussian_matrix(4, 6);
  CHECK(max_abs_diff(transpose_pure(transpose_pure(a)), a) == 0.0);
}

TEST_CASE("rng streams are deterministic and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.gaussian() == b.gaussian());
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}
