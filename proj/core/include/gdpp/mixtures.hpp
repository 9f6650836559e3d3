// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdpp/rng.hpp"
#include "gdpp/tensor.hpp"

namespace gdpp {

/// Ground-truth isotropic Gaussian mixture. For the high-dimensional variant
/// the mixture lives in a latent subspace: `embedding` has orthonormal
/// columns, `latent_centers` holds the modes in latent coordinates, and noise
/// is confined to the embedded subspace. `mode_centers` is always ambient.
struct MixtureSpec {
  std::string name;
  int ambient_dim = 0;
  Tensor mode_centers;  // M x ambient_dim
  double sigma = 0.0;   // shared isotropic std (latent units when embedded)
  double hq_threshold_sigmas = 3.0;
  std::optional<Tensor> embedding;       // ambient_dim x latent_dim
  std::optional<Tensor> latent_centers;  // M x latent_dim
  std::uint64_t seed = 0;

  int modes() const { return mode_centers.rows(); }
  /// Enforces M >= 1, sigma > 0, and pairwise center separation beyond
  /// 2 * hq_threshold_sigmas * sigma (unambiguous high-quality assignment).
  void validate() const;
};

/// 8 modes on a circle of radius `radius` at angles 2 pi k / 8.
MixtureSpec make_ring(double radius = 1.0, double sigma = 0.05);

/// 25 modes on a 5x5 lattice spanning [-half_span, half_span]^2.
MixtureSpec make_grid(double half_span = 4.0, double sigma = 0.05);

/// 10 modes in a 10-dim latent space (standard normal draws rescaled to
/// pairwise distance >= 25 sigma), embedded into 1200 ambient dims by a
/// seeded orthonormal-column matrix. HQ threshold: 10 sigma.
MixtureSpec make_highdim(std::uint64_t seed);

struct SampleSet {
  Tensor samples;           // n x ambient_dim
  std::vector<int> labels;  // generating mode per sample; test oracles only
};

/// Mode index uniform over M; sample = center + sigma * gaussian (through the
/// embedding when present). Labels never feed training.
SampleSet sample(const MixtureSpec& spec, int n, Rng& rng);

/// Training-friendly layout: ambient_dim x batch columns.
Tensor sample_batch_cols(const MixtureSpec& spec, int batch, Rng& rng);

/// Structured-text (JSON) round trip so runs are exactly reproducible.
void save_mixture(const MixtureSpec& spec, const std::string& path);
MixtureSpec load_mixture(const std::string& path);

enum class Benchmark { ring, grid, highdim };

std::optional<Benchmark> benchmark_from_string(const std::string& name);
std::string to_string(Benchmark b);
const std::vector<std::string>& benchmark_names();

/// Canonical benchmark instances; `sigma_override` <= 0 keeps the default.
/// `spec_seed` fixes the highdim geometry independently of training seeds.
MixtureSpec make_benchmark(Benchmark b, double sigma_override = 0.0,
                           std::uint64_t spec_seed = 7);

}  // namespace gdpp
