// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gdpp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operand shapes incompatible with an op. Message names the op and both shapes.
class ShapeError : public Error {
 public:
  ShapeError(const std::string& op, int ar, int ac, int br, int bc)
      : Error(op + ": incompatible shapes " + std::to_string(ar) + "x" +
              std::to_string(ac) + " and " + std::to_string(br) + "x" +
              std::to_string(bc)),
        op_(op) {}
  ShapeError(const std::string& op, const std::string& detail)
      : Error(op + ": " + detail), op_(op) {}
  const std::string& op() const { return op_; }

 private:
  std::string op_;
};

/// Misuse of the autodiff tape (non-scalar loss, repeated backward, ...).
class TapeError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to converge within its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Invalid run configuration or CLI usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Optimizer rejected an update (non-finite gradient). Names the parameter block.
class OptimError : public Error {
 public:
  explicit OptimError(const std::string& block, const std::string& reason)
      : Error("optimizer: parameter block '" + block + "': " + reason),
        block_(block) {}
  const std::string& block() const { return block_; }

 private:
  std::string block_;
};

/// Training aborted on a non-finite loss; carries the iteration and components.
class TrainAbort : public Error {
 public:
  TrainAbort(long long iteration, const std::string& components)
      : Error("training aborted at iteration " + std::to_string(iteration) +
              ": non-finite loss (" + components + ")"),
        iteration_(iteration) {}
  long long iteration() const { return iteration_; }

 private:
  long long iteration_;
};

}  // namespace gdpp
