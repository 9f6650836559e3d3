// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "gdpp/finite_diff.hpp"
#include "gdpp/rng.hpp"
#include "gdpp/tape.hpp"
#include "helpers.hpp"

using namespace gdpp;
using gdpp::testing::grad_error;

namespace {

// Gradient-check a scalar-valued graph builder against central differences.
void check_gradient(const std::function<Tensor(Tape&, const Tensor&)>& build,
                    const Tensor& x0, double tol = 1e-5, double h = 1e-5) {
  Tape tape;
  Tensor x = tape.leaf(x0, true);
  Tensor loss = build(tape, x);
  GradientMap grads = tape.backward(loss);
  Tensor analytic = grads.grad(x);

  Tensor fd = finite_diff_gradient(
      [&](const Tensor& probe) {
        Tape t;
        return build(t, t.leaf(probe, true)).scalar_value();
      },
      x0, h);
  CHECK(grad_error(analytic, fd) <= tol);
}

}  // namespace

TEST_CASE("sigmoid(0) is one half") {
  Tape t;
  CHECK(t.sigmoid(Tensor::scalar(0.0)).scalar_value() == 0.5);
}

TEST_CASE("matmul with identity is a pass-through") {
  Rng rng(3);
  for (int k : {1, 2, 5}) {
    Tensor a = rng.gaussian_matrix(3, k);
    Tape t;
    CHECK(max_abs_diff(t.matmul(Tensor::identity(3), a), a) == 0.0);
  }
}

TEST_CASE("tape matmul matches the naive oracle on random shapes") {
  Rng rng(5);
  Tensor a = rng.gaussian_matrix(3, 4);
  Tensor b = rng.gaussian_matrix(4, 2);
  Tape t;
  CHECK(max_abs_diff(t.matmul(a, b), testing::naive_matmul(a, b)) < 1e-13);
}

TEST_CASE("d/dx (x*x) at x=3 is 6") {
  Tape t;
  Tensor x = t.leaf(Tensor::scalar(3.0), true);
  Tensor y = t.mul(x, x);
  GradientMap g = t.backward(y);
  CHECK(g.grad(x).scalar_value() == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("d/dx sum(tanh(Wx)) matches finite differences") {
  Rng rng(17);
  Tensor w = rng.gaussian_matrix(4, 4);
  Tensor x0 = rng.gaussian_matrix(4, 1);
  check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.tanh(t.matmul(w, x))); },
                 x0, 1e-6);
}

TEST_CASE("constant leaves receive no gradient") {
  Tape t;
  Tensor c = t.leaf(Tensor::scalar(2.0), false);  // constant
  Tensor x = t.leaf(Tensor::scalar(3.0), true);
  Tensor loss = t.mul(x, c);
  GradientMap g = t.backward(loss);
  CHECK_FALSE(g.contains(c));
  CHECK(g.grad(x).scalar_value() == 2.0);
}

TEST_CASE("fan-out sums gradients: y = x + x has dy/dx = 2 exactly") {
  Tape t;
  Tensor x = t.leaf(Tensor::scalar(1.5), true);
  Tensor y = t.add(x, x);
  GradientMap g = t.backward(y);
  CHECK(g.grad(x).scalar_value() == 2.0);
}

TEST_CASE("forward values are independent of requires_grad") {
  Rng rng(23);
  Tensor w = rng.gaussian_matrix(3, 3);
  Tensor x = rng.gaussian_matrix(3, 2);
  Tape t1, t2;
  Tensor with_grad = t1.relu(t1.matmul(t1.leaf(w, true), t1.leaf(x, true)));
  Tensor without = t2.relu(t2.matmul(w, x));
  CHECK(max_abs_diff(with_grad, without) == 0.0);
}

TEST_CASE("backward rejects non-scalar losses and stale tapes") {
  Tape t;
  Tensor x = t.leaf(Tensor::ones(2, 2), true);
  Tensor y = t.mul(x, x);
  CHECK_THROWS_AS(t.backward(y), TapeError);

  Tensor loss = t.sum(y);
  t.backward(loss);
  CHECK_THROWS_AS(t.backward(loss), TapeError);  // one backward per forward
}

TEST_CASE("losses from a different tape are rejected") {
  Tape t1, t2;
  Tensor x = t1.leaf(Tensor::scalar(1.0), true);
  Tensor loss = t1.mul(x, x);
  CHECK_THROWS_AS(t2.backward(loss), TapeError);
  CHECK_THROWS_AS(t2.mul(loss, loss), TapeError);  // cross-tape operand
}

TEST_CASE("finite_diff_gradient: sum of squares at (1,2) gives (2,4)") {
  Tensor x0 = Tensor::col({1.0, 2.0});
  Tensor g = finite_diff_gradient(
      [](const Tensor& x) {
        double s = 0.0;
        for (std::int64_t i = 0; i < x.size(); ++i) s += x[i] * x[i];
        return s;
      },
      x0, 1e-5);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("finite_diff_gradient matches the analytic log-det gradient in 2x2") {
  // f(K) = log det K has df/dK = K^{-T}; K symmetric PSD here.
  Rng rng(29);
  Tensor a = rng.gaussian_matrix(2, 2);
  Tensor k = testing::naive_matmul(transpose_pure(a), a);
  k.at(0, 0) += 1.0;
  k.at(1, 1) += 1.0;

  auto logdet = [](const Tensor& m) {
    return std::log(m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0));
  };
  Tensor fd = finite_diff_gradient(logdet, k, 1e-6);

  const double det = k.at(0, 0) * k.at(1, 1) - k.at(0, 1) * k.at(1, 0);
  Tensor analytic = Tensor::from_rows({{k.at(1, 1) / det, -k.at(1, 0) / det},
                                       {-k.at(0, 1) / det, k.at(0, 0) / det}});
  CHECK(grad_error(analytic, fd) < 1e-7);
}

TEST_CASE("every forward op has an exact reverse rule (finite-difference sweep)") {
  Rng rng(31);

  SUBCASE("matmul both sides") {
    Tensor a0 = rng.gaussian_matrix(3, 4);
    Tensor b = rng.gaussian_matrix(4, 2);
    check_gradient([&](Tape& t, const Tensor& a) { return t.sum(t.matmul(a, b)); }, a0);
    Tensor b0 = rng.gaussian_matrix(4, 2);
    Tensor a = rng.gaussian_matrix(3, 4);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.matmul(a, x)); }, b0);
  }
  SUBCASE("transpose") {
    Tensor x0 = rng.gaussian_matrix(3, 5);
    Tensor w = rng.gaussian_matrix(3, 5);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.mul(t.transpose(x), transpose_pure(w))); }, x0);
  }
  SUBCASE("elementwise add sub mul div") {
    Tensor y = rng.gaussian_matrix(4, 4);
    for (std::int64_t i = 0; i < y.size(); ++i) y[i] = 1.5 + std::abs(y[i]);  // keep div well away from 0
    Tensor x0 = rng.gaussian_matrix(4, 4);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.add(x, y)); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.sub(x, y)); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.mul(x, y)); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.div(x, y)); }, x0);
    Tensor d0 = y;  // denominator side
    Tensor numer = rng.gaussian_matrix(4, 4);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.div(numer, x)); }, d0);
  }
  SUBCASE("scalar broadcast both directions") {
    Tensor x0 = rng.gaussian_matrix(3, 3);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.add(x, Tensor::scalar(0.7))); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.mul(x, Tensor::scalar(-1.3))); }, x0);
    Tensor m = rng.gaussian_matrix(3, 3);
    Tensor s0 = Tensor::scalar(0.8);
    check_gradient([&](Tape& t, const Tensor& s) { return t.sum(t.mul(m, s)); }, s0);
    check_gradient([&](Tape& t, const Tensor& s) { return t.sum(t.div(m, s)); }, s0);
  }
  SUBCASE("relu away from the kink") {
    Tensor x0 = rng.gaussian_matrix(4, 4);
    for (std::int64_t i = 0; i < x0.size(); ++i)
      if (std::abs(x0[i]) < 1e-3) x0[i] = 0.1;  // exclude points near the kink
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.relu(x)); }, x0);
  }
  SUBCASE("tanh sigmoid exp log") {
    Tensor x0 = rng.gaussian_matrix(4, 3);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.tanh(x)); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.sigmoid(x)); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.exp(x)); }, x0);
    Tensor pos = x0;
    for (std::int64_t i = 0; i < pos.size(); ++i) pos[i] = 0.5 + std::abs(pos[i]);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.log(x)); }, pos);
  }
  SUBCASE("sum and mean") {
    Tensor x0 = rng.gaussian_matrix(5, 2);
    Tensor w = rng.gaussian_matrix(5, 2);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.mul(x, w)); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.mean(t.mul(x, w)); }, x0);
  }
  SUBCASE("slices and concatenation") {
    Tensor x0 = rng.gaussian_matrix(6, 4);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.slice_rows(x, 1, 4)); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.sum(t.slice_cols(x, 2, 4)); }, x0);
    Tensor other = rng.gaussian_matrix(6, 4);
    Tensor wr = rng.gaussian_matrix(12, 4);
    check_gradient(
        [&](Tape& t, const Tensor& x) { return t.sum(t.mul(t.concat_rows(x, other), wr)); }, x0);
    Tensor wc = rng.gaussian_matrix(6, 8);
    check_gradient(
        [&](Tape& t, const Tensor& x) { return t.sum(t.mul(t.concat_cols(x, other), wc)); }, x0);
  }
  SUBCASE("l2 norm and dot product") {
    Tensor x0 = rng.gaussian_matrix(6, 1);
    check_gradient([&](Tape& t, const Tensor& x) { return t.l2_norm(x); }, x0);
    Tensor y = rng.gaussian_matrix(6, 1);
    check_gradient([&](Tape& t, const Tensor& x) { return t.dot(x, y); }, x0);
    check_gradient([&](Tape& t, const Tensor& x) { return t.dot(x, x); }, x0);
  }
}

TEST_CASE("relu subgradient at exactly zero is zero") {
  Tape t;
  Tensor x = t.leaf(Tensor::scalar(0.0), true);
  Tensor y = t.relu(x);
  GradientMap g = t.backward(y);
  CHECK(g.grad(x).scalar_value() == 0.0);
}

TEST_CASE("unreached requires-grad leaves report zero gradients") {
  Tape t;
  Tensor used = t.leaf(Tensor::scalar(2.0), true);
  Tensor unused = t.leaf(Tensor::ones(2, 1), true);
  GradientMap g = t.backward(t.mul(used, used));
  CHECK(g.contains(unused));
  CHECK(g.grad(unused)[0] == 0.0);
  CHECK(g.get_or_zero(unused).rows() == 2);
}

TEST_CASE("slice bounds are validated") {
  Tape t;
  Tensor x = Tensor::ones(3, 3);
  CHECK_THROWS_AS(t.slice_rows(x, 2, 2), ShapeError);
  CHECK_THROWS_AS(t.slice_cols(x, 0, 4), ShapeError);
}
