// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/metrics.hpp"

#include <cmath>
#include <limits>

#include "gdpp/adam.hpp"
#include "gdpp/errors.hpp"

namespace gdpp {

ModeAssignment assign_modes(const Tensor& samples, const MixtureSpec& spec) {
  if (samples.cols() != spec.ambient_dim)
    throw ShapeError("assign_modes", "samples have dim " + std::to_string(samples.cols()) +
                                         ", mixture has " + std::to_string(spec.ambient_dim));
  if (!samples.all_finite()) throw Error("assign_modes: non-finite samples");

  const int n = samples.rows();
  const int m = spec.modes();
  const int d = spec.ambient_dim;
  ModeAssignment out;
  out.labels.resize(static_cast<std::size_t>(n));
  out.distances.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    int best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      double sq = 0.0;
      for (int j = 0; j < d; ++j) {
        const double diff = samples.at(s, j) - spec.mode_centers.at(k, j);
        sq += diff * diff;
      }
      if (sq < best_sq) {  // strict: ties keep the lowest index
        best_sq = sq;
        best = k;
      }
    }
    out.labels[static_cast<std::size_t>(s)] = best;
    out.distances[static_cast<std::size_t>(s)] = std::sqrt(best_sq) / spec.sigma;
  }
  return out;
}

Coverage coverage_metrics(const Tensor& samples, const MixtureSpec& spec) {
  const ModeAssignment assign = assign_modes(samples, spec);
  std::vector<bool> captured(static_cast<std::size_t>(spec.modes()), false);
  int hq = 0;
  for (std::size_t i = 0; i < assign.labels.size(); ++i) {
    if (assign.distances[i] <= spec.hq_threshold_sigmas) {
      ++hq;
      captured[static_cast<std::size_t>(assign.labels[i])] = true;
    }
  }
  Coverage out;
  for (bool c : captured) out.modes_captured += c ? 1 : 0;
  out.hq_fraction = static_cast<double>(hq) / static_cast<double>(samples.rows());
  return out;
}

double mode_kl(const Tensor& samples, const MixtureSpec& spec) {
  const ModeAssignment assign = assign_modes(samples, spec);
  const int m = spec.modes();
  const double n = static_cast<double>(samples.rows());
  std::vector<double> counts(static_cast<std::size_t>(m), 0.0);
  for (int label : assign.labels) counts[static_cast<std::size_t>(label)] += 1.0;

  const double eps = 1.0 / (10.0 * n);
  const double norm = 1.0 + m * eps;
  double kl = 0.0;
  for (int k = 0; k < m; ++k) {
    const double p = (counts[static_cast<std::size_t>(k)] / n + eps) / norm;
    kl += p * std::log(p * m);
  }
  return kl;
}

IvoResult ivo(const Tensor& targets, const GeneratorGraph& generator, int noise_dim,
              const IvoOptions& options) {
  const int k = targets.rows();
  const int d = targets.cols();
  if (k < 1) throw ConfigError("ivo: need at least one target");

  const Tensor x = transpose_pure(targets);  // d x k
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> best(static_cast<std::size_t>(k), nan);

  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng(derive_seed(options.seed, 0x69766f /* "ivo" */ + static_cast<std::uint64_t>(restart)));
    Tensor z = rng.gaussian_matrix(noise_dim, k);
    Adam adam(AdamConfig{options.lr, 0.9, 0.999, 1e-8});
    std::vector<bool> dead(static_cast<std::size_t>(k), false);

    for (int step = 0; step < options.steps; ++step) {
      Tape tape;
      Tensor z_leaf = tape.leaf(z, true);
      Tensor out = generator(tape, z_leaf);
      if (out.rows() != d || out.cols() != k)
        throw ShapeError("ivo", "generator produced " + std::to_string(out.rows()) + "x" +
                                    std::to_string(out.cols()) + ", expected " +
                                    std::to_string(d) + "x" + std::to_string(k));
      Tensor r = tape.sub(x, out);
      Tensor loss = tape.sum(tape.mul(r, r));
      GradientMap grads = tape.backward(loss);
      Tensor g = grads.get_or_zero(z_leaf);
      // Per-target failure: zero non-finite columns instead of aborting the batch.
      for (int c = 0; c < k; ++c) {
        bool finite = true;
        for (int rdim = 0; rdim < noise_dim; ++rdim)
          if (!std::isfinite(g.at(rdim, c))) finite = false;
        if (!finite) {
          dead[static_cast<std::size_t>(c)] = true;
          for (int rdim = 0; rdim < noise_dim; ++rdim) g.at(rdim, c) = 0.0;
        }
      }
      adam.step_one(z, g);
    }

    // Final residuals for this restart.
    Tape scratch;
    Tensor out = generator(scratch, z);
    for (int c = 0; c < k; ++c) {
      if (dead[static_cast<std::size_t>(c)]) continue;
      double sq = 0.0;
      bool finite = true;
      for (int rdim = 0; rdim < d; ++rdim) {
        const double diff = x.at(rdim, c) - out.at(rdim, c);
        if (!std::isfinite(diff)) finite = false;
        sq += diff * diff;
      }
      if (!finite) continue;
      double& cur = best[static_cast<std::size_t>(c)];
      if (std::isnan(cur) || sq < cur) cur = sq;
    }
  }

  IvoResult result;
  result.per_target = best;
  double sum = 0.0;
  int ok = 0;
  for (double v : best) {
    if (std::isnan(v)) {
      ++result.failed;
    } else {
      sum += v;
      ++ok;
    }
  }
  result.mean_mse = ok > 0 ? sum / ok : nan;
  return result;
}

}  // namespace gdpp
