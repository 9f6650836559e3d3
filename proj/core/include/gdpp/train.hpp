// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gdpp/adam.hpp"
#include "gdpp/checkpoint.hpp"
#include "gdpp/loss.hpp"
#include "gdpp/metrics.hpp"
#include "gdpp/mixtures.hpp"
#include "gdpp/models.hpp"

namespace gdpp {

enum class ModelKind { gan, vae };
enum class GenLossForm { saturating, non_saturating };

struct GdppSettings {
  bool enabled = false;
  GdppVariant variant = GdppVariant::full;
  GdppOptions options{};
};

struct TrainConfig {
  Benchmark benchmark = Benchmark::ring;
  ModelKind model = ModelKind::gan;
  GdppSettings gdpp{};
  int iterations = 25000;
  int batch = 128;
  std::uint64_t seed = 0;
  int eval_every = 500;
  GenLossForm gen_loss = GenLossForm::non_saturating;

  int noise_dim = 64;
  int hidden = 128;
  int vae_latent = 0;  // 0 -> 8 for 2D benchmarks, 32 for highdim
  AdamConfig g_opt{1e-4, 0.5, 0.999, 1e-8};
  AdamConfig d_opt{1e-4, 0.5, 0.999, 1e-8};
  AdamConfig vae_opt{1e-3, 0.9, 0.999, 1e-8};
  /// Draw the VAE fake batch from prior samples instead of the posterior
  /// reconstruction path.
  bool vae_fake_from_prior = false;

  int eval_samples = 2500;
  bool eval_ivo = false;  // inference-via-optimization at the final checkpoint
  IvoOptions ivo{};
  int ivo_targets = 64;

  double sigma_override = 0.0;    // <= 0 keeps the benchmark default
  std::uint64_t mixture_seed = 7; // highdim geometry, shared across seeds

  void validate() const;
};

struct RunResult {
  Checkpoint checkpoint;
  std::vector<MetricsRecord> series;  // floor(iterations / eval_every) + 1 records
  double avg_iter_seconds = 0.0;
};

/// Alternating GAN training: one discriminator step on fresh real/fake data,
/// then one generator step (its own fresh noise and, when the diversity loss
/// is on, a fresh real batch featurized by the current discriminator). The
/// discriminator is frozen during the generator step: gradients flow through
/// its layers into the generator but never update it.
class GanTrainer {
 public:
  explicit GanTrainer(const TrainConfig& config);

  void d_step();
  void g_step();
  void step() { d_step(); g_step(); }

  const GanPair& gan() const { return *gan_; }
  GanPair& gan() { return *gan_; }
  const MixtureSpec& spec() const { return spec_; }
  const TrainConfig& config() const { return config_; }
  std::int64_t iteration() const { return iteration_; }

  /// Deterministic evaluation samples for checkpoint `index` (n x d).
  Tensor eval_samples(int n, int checkpoint_index) const;
  MetricsRecord evaluate(int checkpoint_index, double wall_seconds, bool with_ivo) const;
  Checkpoint checkpoint() const;

 private:
  TrainConfig config_;
  MixtureSpec spec_;
  std::unique_ptr<GanPair> gan_;
  Adam g_adam_, d_adam_;
  Rng rng_data_, rng_noise_;
  std::int64_t iteration_ = 0;
};

/// Joint encoder/decoder training on reconstruction + KL, with the optional
/// diversity term computed between encoder features of the input batch
/// (detached) and of the decoded fake batch.
class VaeTrainer {
 public:
  explicit VaeTrainer(const TrainConfig& config);

  void step();

  const VaeNets& nets() const { return *nets_; }
  const MixtureSpec& spec() const { return spec_; }
  const TrainConfig& config() const { return config_; }
  std::int64_t iteration() const { return iteration_; }
  double last_recon() const { return last_recon_; }
  double last_kl() const { return last_kl_; }

  Tensor eval_samples(int n, int checkpoint_index) const;
  MetricsRecord evaluate(int checkpoint_index, double wall_seconds, bool with_ivo) const;
  Checkpoint checkpoint() const;

 private:
  TrainConfig config_;
  MixtureSpec spec_;
  std::unique_ptr<VaeNets> nets_;
  Adam enc_adam_, dec_adam_;
  Rng rng_data_, rng_eps_;
  std::int64_t iteration_ = 0;
  double last_recon_ = 0.0;
  double last_kl_ = 0.0;
};

RunResult train_gan(const TrainConfig& config);
RunResult train_vae(const TrainConfig& config);
RunResult train(const TrainConfig& config);

struct BatchSweepEntry {
  int batch = 0;
  RunResult result;
};

/// Fixed iteration count across batch sizes (data-efficiency protocol).
std::vector<BatchSweepEntry> sweep_batch_size(const TrainConfig& config,
                                              const std::vector<int>& sizes = {64, 128, 256, 512},
                                              int workers = 1);

/// Single run at the given batch size; the checkpoint series is the sweep.
RunResult sweep_iterations(const TrainConfig& config, int batch = 512);

}  // namespace gdpp
