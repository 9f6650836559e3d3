// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gdpp/mixtures.hpp"
#include "gdpp/tape.hpp"
#include "gdpp/tensor.hpp"

namespace gdpp {

/// One evaluation checkpoint of a training run.
struct MetricsRecord {
  std::int64_t iteration = 0;
  int modes_captured = 0;
  double hq_fraction = 0.0;
  double mode_kl = 0.0;
  std::optional<double> ivo_mse;
  double wall_seconds = 0.0;
};

struct ModeAssignment {
  std::vector<int> labels;            // nearest mode center (ties -> lowest index)
  std::vector<double> distances;      // Euclidean distance in units of spec.sigma
};

/// Nearest-center assignment in ambient space.
ModeAssignment assign_modes(const Tensor& samples, const MixtureSpec& spec);

struct Coverage {
  int modes_captured = 0;
  double hq_fraction = 0.0;
};

/// A sample is high-quality iff it lies within hq_threshold_sigmas * sigma of
/// its assigned center; a mode is captured iff at least one HQ sample is
/// assigned to it.
Coverage coverage_metrics(const Tensor& samples, const MixtureSpec& spec);

/// KL(empirical nearest-center distribution || uniform) over all samples,
/// with additive smoothing eps = 1 / (10 n), renormalized. Natural log.
double mode_kl(const Tensor& samples, const MixtureSpec& spec);

/// Builds the generator output (d x B) for a noise batch on the given tape.
using GeneratorGraph = std::function<Tensor(Tape&, const Tensor& z)>;

struct IvoOptions {
  int steps = 500;
  double lr = 0.01;
  int restarts = 3;
  std::uint64_t seed = 0;
};

struct IvoResult {
  double mean_mse = 0.0;             // mean over non-failed targets of ||x - G(z*)||^2
  int failed = 0;
  std::vector<double> per_target;    // squared l2 residual per target (NaN if failed)
};

/// Inference-via-optimization: per target, minimize ||x - G(z)||^2 over z
/// with Adam (restarts keep the best final residual). Targets are optimized
/// jointly as columns of one batch; the loss separates per column, so the
/// trajectories match independent runs and merge deterministically by index.
IvoResult ivo(const Tensor& targets, const GeneratorGraph& generator, int noise_dim,
              const IvoOptions& options = {});

}  // namespace gdpp
