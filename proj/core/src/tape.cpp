// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/tape.hpp"

#include <atomic>
#include <cmath>
#include <utility>

namespace gdpp {

namespace {

std::atomic<int> g_tape_serial{1};

double broadcast_at(const Tensor& t, std::int64_t i) {
  return t.is_scalar() ? t[0] : t[i];
}

}  // namespace

bool GradientMap::contains(const Tensor& leaf) const {
  return leaf.node() && by_node_.count(*leaf.node()) > 0;
}

const Tensor& GradientMap::grad(const Tensor& leaf) const {
  if (!leaf.node()) throw TapeError("gradient requested for a tensor that is not on a tape");
  auto it = by_node_.find(*leaf.node());
  if (it == by_node_.end())
    throw TapeError("gradient requested for a node that is not a requires-grad leaf");
  return it->second;
}

Tensor GradientMap::get_or_zero(const Tensor& leaf) const {
  if (contains(leaf)) return grad(leaf);
  return Tensor(leaf.rows(), leaf.cols());
}

Tape::Tape() : serial_(g_tape_serial.fetch_add(1)) {}

int Tape::input_id(const Tensor& t, const char* op) const {
  if (!t.on_tape()) return -1;
  if (t.tape_serial_ != serial_)
    throw TapeError(std::string(op) + ": input tensor belongs to a different tape");
  return *t.node();
}

Tensor Tape::record(const char* op, int ia, int ib, Tensor value, bool grad_leaf,
                    std::function<void(Tape&, std::span<const double>)> back) {
  Node n;
  n.op = op;
  n.a = ia;
  n.b = ib;
  n.rows = value.rows();
  n.cols = value.cols();
  n.grad_leaf = grad_leaf;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  value.node_ = static_cast<int>(nodes_.size()) - 1;
  value.tape_serial_ = serial_;
  return value;
}

void Tape::accumulate(int node, std::span<const double> g) {
  auto& buf = grads_[static_cast<std::size_t>(node)];
  if (buf.empty()) {
    buf.assign(g.begin(), g.end());
  } else {
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] += g[i];
  }
}

Tensor Tape::leaf(const Tensor& t, bool requires_grad) {
  if (!requires_grad) return t.detached();
  Tensor out = t.detached();
  out.requires_grad_ = true;
  return record("leaf", -1, -1, std::move(out), /*grad_leaf=*/true,
                [](Tape&, std::span<const double>) {});
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  const int ia = input_id(a, "matmul");
  const int ib = input_id(b, "matmul");
  Tensor out(a.rows(), b.cols());
  matmul_into(a.values(), a.rows(), a.cols(), b.values(), b.rows(), b.cols(),
              out.mutable_values());
  if (ia < 0 && ib < 0) return out;

  // dA = G B^T, dB = A^T G. Capture only the operand the other side needs.
  Tensor a_saved = (ib >= 0) ? a.detached() : Tensor();
  Tensor b_saved = (ia >= 0) ? b.detached() : Tensor();
  const int m = a.rows(), k = a.cols(), n = b.cols();
  return record("matmul", ia, ib, std::move(out), false,
                [ia, ib, m, k, n, a_saved = std::move(a_saved),
                 b_saved = std::move(b_saved)](Tape& t, std::span<const double> g) {
                  if (ia >= 0) {
                    std::vector<double> da(static_cast<std::size_t>(m) * k, 0.0);
                    // da[i][p] = sum_j g[i][j] * b[p][j]
                    for (int i = 0; i < m; ++i)
                      for (int p = 0; p < k; ++p) {
                        double s = 0.0;
                        const double* gi = g.data() + static_cast<std::size_t>(i) * n;
                        const double* bp = b_saved.values().data() + static_cast<std::size_t>(p) * n;
                        for (int j = 0; j < n; ++j) s += gi[j] * bp[j];
                        da[static_cast<std::size_t>(i) * k + p] = s;
                      }
                    t.accumulate(ia, da);
                  }
                  if (ib >= 0) {
                    std::vector<double> db(static_cast<std::size_t>(k) * n, 0.0);
                    // db[p][j] = sum_i a[i][p] * g[i][j]
                    for (int i = 0; i < m; ++i) {
                      const double* ai = a_saved.values().data() + static_cast<std::size_t>(i) * k;
                      const double* gi = g.data() + static_cast<std::size_t>(i) * n;
                      for (int p = 0; p < k; ++p) {
                        const double aip = ai[p];
                        double* dbp = db.data() + static_cast<std::size_t>(p) * n;
                        for (int j = 0; j < n; ++j) dbp[j] += aip * gi[j];
                      }
                    }
                    t.accumulate(ib, db);
                  }
                });
}

Tensor Tape::transpose(const Tensor& a) {
  const int ia = input_id(a, "transpose");
  Tensor out = transpose_pure(a);
  if (ia < 0) return out;
  const int r = a.rows(), c = a.cols();
  return record("transpose", ia, -1, std::move(out), false,
                [ia, r, c](Tape& t, std::span<const double> g) {
                  std::vector<double> da(static_cast<std::size_t>(r) * c);
                  for (int i = 0; i < c; ++i)       // g is c x r
                    for (int j = 0; j < r; ++j)
                      da[static_cast<std::size_t>(j) * c + i] =
                          g[static_cast<std::size_t>(i) * r + j];
                  t.accumulate(ia, da);
                });
}

Tensor Tape::binary(const char* name, BinOp op, const Tensor& a, const Tensor& b) {
  const bool a_scalar = a.is_scalar(), b_scalar = b.is_scalar();
  if (!a.same_shape(b) && !a_scalar && !b_scalar)
    throw ShapeError(name, a.rows(), a.cols(), b.rows(), b.cols());
  const int ia = input_id(a, name);
  const int ib = input_id(b, name);
  const Tensor& shape_src = a_scalar ? b : a;
  Tensor out(shape_src.rows(), shape_src.cols());
  for (std::int64_t i = 0; i < out.size(); ++i) {
    const double x = broadcast_at(a, i), y = broadcast_at(b, i);
    switch (op) {
      case BinOp::add: out[i] = x + y; break;
      case BinOp::sub: out[i] = x - y; break;
      case BinOp::mul: out[i] = x * y; break;
      case BinOp::div: out[i] = x / y; break;
    }
  }
  if (ia < 0 && ib < 0) return out;

  // mul/div need operand values in the reverse rules; add/sub do not.
  const bool hadamard = (op == BinOp::mul || op == BinOp::div);
  const bool save_a = hadamard && ib >= 0;
  const bool save_b = (hadamard && ia >= 0) || (op == BinOp::div && ib >= 0);
  Tensor a_saved = save_a ? a.detached() : Tensor();
  Tensor b_saved = save_b ? b.detached() : Tensor();

  return record(name, ia, ib, std::move(out), false,
                [op, ia, ib, a_saved = std::move(a_saved),
                 b_saved = std::move(b_saved), a_scalar,
                 b_scalar](Tape& t, std::span<const double> g) {
                  const std::int64_t n = static_cast<std::int64_t>(g.size());
                  if (ia >= 0) {
                    std::vector<double> da(static_cast<std::size_t>(n));
                    for (std::int64_t i = 0; i < n; ++i) {
                      switch (op) {
                        case BinOp::add: da[i] = g[i]; break;
                        case BinOp::sub: da[i] = g[i]; break;
                        case BinOp::mul: da[i] = g[i] * broadcast_at(b_saved, i); break;
                        case BinOp::div: da[i] = g[i] / broadcast_at(b_saved, i); break;
                      }
                    }
                    if (a_scalar && n > 1) {
                      double s = 0.0;
                      for (double v : da) s += v;
                      da.assign(1, s);
                    }
                    t.accumulate(ia, da);
                  }
                  if (ib >= 0) {
                    std::vector<double> db(static_cast<std::size_t>(n));
                    for (std::int64_t i = 0; i < n; ++i) {
                      switch (op) {
                        case BinOp::add: db[i] = g[i]; break;
                        case BinOp::sub: db[i] = -g[i]; break;
                        case BinOp::mul: db[i] = g[i] * broadcast_at(a_saved, i); break;
                        case BinOp::div: {
                          const double bv = broadcast_at(b_saved, i);
                          db[i] = -g[i] * broadcast_at(a_saved, i) / (bv * bv);
                          break;
                        }
                      }
                    }
                    if (b_scalar && n > 1) {
                      double s = 0.0;
                      for (double v : db) s += v;
                      db.assign(1, s);
                    }
                    t.accumulate(ib, db);
                  }
                });
}

Tensor Tape::add(const Tensor& a, const Tensor& b) { return binary("add", BinOp::add, a, b); }
Tensor Tape::sub(const Tensor& a, const Tensor& b) { return binary("sub", BinOp::sub, a, b); }
Tensor Tape::mul(const Tensor& a, const Tensor& b) { return binary("mul", BinOp::mul, a, b); }
Tensor Tape::div(const Tensor& a, const Tensor& b) { return binary("div", BinOp::div, a, b); }

Tensor Tape::add_scalar(const Tensor& a, double s) { return add(a, Tensor::scalar(s)); }
Tensor Tape::mul_scalar(const Tensor& a, double s) { return mul(a, Tensor::scalar(s)); }

Tensor Tape::unary(const char* name, const Tensor& a,
                   double (*fwd)(double), double (*dfdxy)(double, double)) {
  const int ia = input_id(a, name);
  Tensor out(a.rows(), a.cols());
  for (std::int64_t i = 0; i < a.size(); ++i) out[i] = fwd(a[i]);
  if (ia < 0) return out;
  Tensor x_saved = a.detached();
  Tensor y_saved = out;  // copy of forward values
  return record(name, ia, -1, std::move(out), false,
                [ia, dfdxy, x_saved = std::move(x_saved),
                 y_saved = std::move(y_saved)](Tape& t, std::span<const double> g) {
                  std::vector<double> da(g.size());
                  for (std::size_t i = 0; i < g.size(); ++i)
                    da[i] = g[i] * dfdxy(x_saved[static_cast<std::int64_t>(i)],
                                         y_saved[static_cast<std::int64_t>(i)]);
                  t.accumulate(ia, da);
                });
}

Tensor Tape::relu(const Tensor& a) {
  // Subgradient at exactly 0 is 0.
  return unary("relu", a,
               [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor Tape::tanh(const Tensor& a) {
  return unary("tanh", a,
               [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Tensor Tape::sigmoid(const Tensor& a) {
  return unary("sigmoid", a,
               [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
               [](double, double y) { return y * (1.0 - y); });
}

Tensor Tape::exp(const Tensor& a) {
  return unary("exp", a,
               [](double x) { return std::exp(x); },
               [](double, double y) { return y; });
}

Tensor Tape::log(const Tensor& a) {
  return unary("log", a,
               [](double x) { return std::log(x); },
               [](double x, double) { return 1.0 / x; });
}

Tensor Tape::sum(const Tensor& a) {
  const int ia = input_id(a, "sum");
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += a[i];
  Tensor out = Tensor::scalar(s);
  if (ia < 0) return out;
  const std::size_t n = static_cast<std::size_t>(a.size());
  return record("sum", ia, -1, std::move(out), false,
                [ia, n](Tape& t, std::span<const double> g) {
                  t.accumulate(ia, std::vector<double>(n, g[0]));
                });
}

Tensor Tape::mean(const Tensor& a) {
  const int ia = input_id(a, "mean");
  if (a.size() == 0) throw ShapeError("mean", "empty tensor");
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += a[i];
  const double n = static_cast<double>(a.size());
  Tensor out = Tensor::scalar(s / n);
  if (ia < 0) return out;
  const std::size_t cnt = static_cast<std::size_t>(a.size());
  return record("mean", ia, -1, std::move(out), false,
                [ia, cnt, n](Tape& t, std::span<const double> g) {
                  t.accumulate(ia, std::vector<double>(cnt, g[0] / n));
                });
}

Tensor Tape::slice_rows(const Tensor& a, int r0, int r1) {
  if (r0 < 0 || r1 > a.rows() || r0 >= r1)
    throw ShapeError("slice_rows", "range [" + std::to_string(r0) + "," +
                                       std::to_string(r1) + ") out of " +
                                       std::to_string(a.rows()) + " rows");
  const int ia = input_id(a, "slice_rows");
  Tensor out(r1 - r0, a.cols());
  for (int i = r0; i < r1; ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i - r0, j) = a.at(i, j);
  if (ia < 0) return out;
  const int rows = a.rows(), cols = a.cols();
  return record("slice_rows", ia, -1, std::move(out), false,
                [ia, r0, r1, rows, cols](Tape& t, std::span<const double> g) {
                  std::vector<double> da(static_cast<std::size_t>(rows) * cols, 0.0);
                  for (int i = r0; i < r1; ++i)
                    for (int j = 0; j < cols; ++j)
                      da[static_cast<std::size_t>(i) * cols + j] =
                          g[static_cast<std::size_t>(i - r0) * cols + j];
                  t.accumulate(ia, da);
                });
}

Tensor Tape::slice_cols(const Tensor& a, int c0, int c1) {
  if (c0 < 0 || c1 > a.cols() || c0 >= c1)
    throw ShapeError("slice_cols", "range [" + std::to_string(c0) + "," +
                                       std::to_string(c1) + ") out of " +
                                       std::to_string(a.cols()) + " columns");
  const int ia = input_id(a, "slice_cols");
  Tensor out(a.rows(), c1 - c0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = c0; j < c1; ++j) out.at(i, j - c0) = a.at(i, j);
  if (ia < 0) return out;
  const int rows = a.rows(), cols = a.cols();
  return record("slice_cols", ia, -1, std::move(out), false,
                [ia, c0, c1, rows, cols](Tape& t, std::span<const double> g) {
                  std::vector<double> da(static_cast<std::size_t>(rows) * cols, 0.0);
                  const int w = c1 - c0;
                  for (int i = 0; i < rows; ++i)
                    for (int j = c0; j < c1; ++j)
                      da[static_cast<std::size_t>(i) * cols + j] =
                          g[static_cast<std::size_t>(i) * w + (j - c0)];
                  t.accumulate(ia, da);
                });
}

Tensor Tape::concat_rows(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols())
    throw ShapeError("concat_rows", a.rows(), a.cols(), b.rows(), b.cols());
  const int ia = input_id(a, "concat_rows");
  const int ib = input_id(b, "concat_rows");
  Tensor out(a.rows() + b.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
  if (ia < 0 && ib < 0) return out;
  const int ar = a.rows(), br = b.rows(), cols = a.cols();
  return record("concat_rows", ia, ib, std::move(out), false,
                [ia, ib, ar, br, cols](Tape& t, std::span<const double> g) {
                  if (ia >= 0)
                    t.accumulate(ia, g.subspan(0, static_cast<std::size_t>(ar) * cols));
                  if (ib >= 0)
                    t.accumulate(ib, g.subspan(static_cast<std::size_t>(ar) * cols,
                                               static_cast<std::size_t>(br) * cols));
                });
}

Tensor Tape::concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows())
    throw ShapeError("concat_cols", a.rows(), a.cols(), b.rows(), b.cols());
  const int ia = input_id(a, "concat_cols");
  const int ib = input_id(b, "concat_cols");
  Tensor out(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
  }
  if (ia < 0 && ib < 0) return out;
  const int rows = a.rows(), ac = a.cols(), bc = b.cols();
  return record("concat_cols", ia, ib, std::move(out), false,
                [ia, ib, rows, ac, bc](Tape& t, std::span<const double> g) {
                  const int w = ac + bc;
                  if (ia >= 0) {
                    std::vector<double> da(static_cast<std::size_t>(rows) * ac);
                    for (int i = 0; i < rows; ++i)
                      for (int j = 0; j < ac; ++j)
                        da[static_cast<std::size_t>(i) * ac + j] =
                            g[static_cast<std::size_t>(i) * w + j];
                    t.accumulate(ia, da);
                  }
                  if (ib >= 0) {
                    std::vector<double> db(static_cast<std::size_t>(rows) * bc);
                    for (int i = 0; i < rows; ++i)
                      for (int j = 0; j < bc; ++j)
                        db[static_cast<std::size_t>(i) * bc + j] =
                            g[static_cast<std::size_t>(i) * w + ac + j];
                    t.accumulate(ib, db);
                  }
                });
}

Tensor Tape::l2_norm(const Tensor& a) {
  const int ia = input_id(a, "l2_norm");
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
  const double norm = std::sqrt(s);
  Tensor out = Tensor::scalar(norm);
  if (ia < 0) return out;
  Tensor a_saved = a.detached();
  return record("l2_norm", ia, -1, std::move(out), false,
                [ia, norm, a_saved = std::move(a_saved)](Tape& t,
                                                         std::span<const double> g) {
                  // d||a||/da = a/||a||; the subgradient at a = 0 is taken as 0.
                  std::vector<double> da(static_cast<std::size_t>(a_saved.size()), 0.0);
                  if (norm > 0.0)
                    for (std::size_t i = 0; i < da.size(); ++i)
                      da[i] = g[0] * a_saved[static_cast<std::int64_t>(i)] / norm;
                  t.accumulate(ia, da);
                });
}

Tensor Tape::dot(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw ShapeError("dot", a.rows(), a.cols(), b.rows(), b.cols());
  const int ia = input_id(a, "dot");
  const int ib = input_id(b, "dot");
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  Tensor out = Tensor::scalar(s);
  if (ia < 0 && ib < 0) return out;
  Tensor a_saved = (ib >= 0) ? a.detached() : Tensor();
  Tensor b_saved = (ia >= 0) ? b.detached() : Tensor();
  return record("dot", ia, ib, std::move(out), false,
                [ia, ib, a_saved = std::move(a_saved),
                 b_saved = std::move(b_saved)](Tape& t, std::span<const double> g) {
                  if (ia >= 0) {
                    std::vector<double> da(static_cast<std::size_t>(b_saved.size()));
                    for (std::size_t i = 0; i < da.size(); ++i)
                      da[i] = g[0] * b_saved[static_cast<std::int64_t>(i)];
                    t.accumulate(ia, da);
                  }
                  if (ib >= 0) {
                    std::vector<double> db(static_cast<std::size_t>(a_saved.size()));
                    for (std::size_t i = 0; i < db.size(); ++i)
                      db[i] = g[0] * a_saved[static_cast<std::int64_t>(i)];
                    t.accumulate(ib, db);
                  }
                });
}

Tensor Tape::custom(const char* op, const Tensor& input, Tensor value,
                    std::function<Tensor(const Tensor& grad_out)> vjp) {
  const int ia = input_id(input, op);
  if (ia < 0) return value;
  const int vr = value.rows(), vc = value.cols();
  return record(op, ia, -1, std::move(value), false,
                [ia, vr, vc, vjp = std::move(vjp)](Tape& t, std::span<const double> g) {
                  Tensor gout(vr, vc, std::vector<double>(g.begin(), g.end()));
                  Tensor gin = vjp(gout);
                  t.accumulate(ia, gin.values());
                });
}

GradientMap Tape::backward(const Tensor& loss) {
  if (consumed_)
    throw TapeError("backward: stale tape (backward already ran; re-record the graph)");
  if (!loss.on_tape() || loss.tape_serial_ != serial_)
    throw TapeError("backward: loss was not recorded on this tape");
  if (!loss.is_scalar())
    throw TapeError("backward: loss must be a scalar, got " + std::to_string(loss.rows()) +
                    "x" + std::to_string(loss.cols()));
  consumed_ = true;
  const int root = *loss.node();
  grads_.assign(nodes_.size(), {});
  grads_[static_cast<std::size_t>(root)] = {1.0};
  for (int id = root; id >= 0; --id) {
    const auto& buf = grads_[static_cast<std::size_t>(id)];
    if (buf.empty()) continue;
    nodes_[static_cast<std::size_t>(id)].back(*this, buf);
  }
  GradientMap map;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (!nodes_[id].grad_leaf) continue;
    const auto& buf = grads_[id];
    Tensor g(nodes_[id].rows, nodes_[id].cols);
    if (!buf.empty()) g.mutable_values().assign(buf.begin(), buf.end());
    map.by_node_.emplace(static_cast<int>(id), std::move(g));
  }
  grads_.clear();
  return map;
}

}  // namespace gdpp
