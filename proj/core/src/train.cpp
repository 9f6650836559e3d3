// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "gdpp/errors.hpp"
#include "gdpp/parallel.hpp"

namespace gdpp {

namespace {

constexpr std::uint64_t kStreamData = 0x64617461;   // "data"
constexpr std::uint64_t kStreamNoise = 0x6e6f6973;  // "nois"
constexpr std::uint64_t kStreamEps = 0x657073;      // "eps"
constexpr std::uint64_t kStreamEval = 0x6576616c;   // "eval"
constexpr std::uint64_t kStreamIvo = 0x69766f74;    // "ivot"
constexpr std::uint64_t kStreamInit = 0x696e6974;   // "init"

std::string fmt_loss(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// min(max(x, lo), hi) composed from relu; keeps log(sigmoid(.)) finite.
Tensor clamp(Tape& t, const Tensor& x, double lo, double hi) {
  Tensor u = t.relu(t.add_scalar(x, -lo));
  Tensor w = t.relu(t.add_scalar(t.mul_scalar(u, -1.0), hi - lo));
  return t.add_scalar(t.mul_scalar(w, -1.0), hi);
}

Tensor logsig(Tape& t, const Tensor& x) {
  return t.log(t.sigmoid(clamp(t, x, -30.0, 30.0)));
}

Tensor neg(Tape& t, const Tensor& x) { return t.mul_scalar(x, -1.0); }

int default_vae_latent(Benchmark b) { return b == Benchmark::highdim ? 32 : 8; }

MetricsRecord make_record(const Tensor& samples, const MixtureSpec& spec,
                          std::int64_t iteration, double wall_seconds) {
  MetricsRecord rec;
  rec.iteration = iteration;
  const Coverage cov = coverage_metrics(samples, spec);
  rec.modes_captured = cov.modes_captured;
  rec.hq_fraction = cov.hq_fraction;
  rec.mode_kl = mode_kl(samples, spec);
  rec.wall_seconds = wall_seconds;
  return rec;
}

}  // namespace

void TrainConfig::validate() const {
  if (batch < 2) throw ConfigError("train: batch must be >= 2 (a 1x1 kernel has no diversity)");
  if (iterations < 0) throw ConfigError("train: iterations must be >= 0");
  if (eval_every < 1) throw ConfigError("train: eval_every must be >= 1");
  if (eval_samples < 1) throw ConfigError("train: eval_samples must be >= 1");
  if (noise_dim < 1 || hidden < 1) throw ConfigError("train: model widths must be positive");
}

// ---------------------------------------------------------------------------
// GAN

GanTrainer::GanTrainer(const TrainConfig& config)
    : config_(config),
      spec_(make_benchmark(config.benchmark, config.sigma_override, config.mixture_seed)),
      g_adam_(config.g_opt),
      d_adam_(config.d_opt),
      rng_data_(derive_seed(config.seed, kStreamData)),
      rng_noise_(derive_seed(config.seed, kStreamNoise)) {
  config_.validate();
  GanConfig gc;
  gc.data_dim = spec_.ambient_dim;
  gc.noise_dim = config_.noise_dim;
  gc.hidden = config_.hidden;
  gc.seed = derive_seed(config_.seed, kStreamInit);
  gan_ = std::make_unique<GanPair>(make_gan(gc));
}

void GanTrainer::d_step() {
  const int b = config_.batch;
  Tensor x_real = sample_batch_cols(spec_, b, rng_data_);
  Tensor z = rng_noise_.gaussian_matrix(config_.noise_dim, b);
  Tensor x_fake = gan_->generator.forward_pure(z).output;

  Tape tape;
  std::vector<Tensor> d_params = gan_->discriminator.bind(tape);
  Tensor logit_real = discriminator_forward(tape, gan_->discriminator, d_params, x_real).logits;
  Tensor logit_fake = discriminator_forward(tape, gan_->discriminator, d_params, x_fake).logits;
  Tensor loss = neg(tape, tape.add(tape.mean(logsig(tape, logit_real)),
                                   tape.mean(logsig(tape, neg(tape, logit_fake)))));
  if (!std::isfinite(loss.scalar_value()))
    throw TrainAbort(iteration_ + 1, "d_loss=" + fmt_loss(loss.scalar_value()));
  GradientMap grads = tape.backward(loss);
  d_adam_.step(gan_->discriminator.blocks(), d_params, grads);
}

void GanTrainer::g_step() {
  const int b = config_.batch;
  Tensor z = rng_noise_.gaussian_matrix(config_.noise_dim, b);

  Tape tape;
  std::vector<Tensor> g_params = gan_->generator.bind(tape);
  Tensor x_fake = generator_forward(tape, gan_->generator, g_params, z);
  // Frozen discriminator: constants on the tape, so gradients flow through
  // its layers into the generator without updating it.
  DiscriminatorOut d_out = discriminator_forward(
      tape, gan_->discriminator, gan_->discriminator.constant_params(), x_fake);

  Tensor adv = config_.gen_loss == GenLossForm::non_saturating
                   ? neg(tape, tape.mean(logsig(tape, d_out.logits)))
                   : tape.mean(logsig(tape, neg(tape, d_out.logits)));

  Tensor loss = adv;
  double gdpp_value = 0.0;
  if (config_.gdpp.enabled) {
    Tensor x_real = sample_batch_cols(spec_, b, rng_data_);
    Tensor real_hidden = gan_->discriminator.forward_pure(x_real).last_hidden;
    FeatureBatch real_feats = extract_features(tape, real_hidden, Origin::real);
    FeatureBatch fake_feats = extract_features(tape, d_out.features, Origin::fake);
    Tensor diversity =
        gdpp_loss(tape, real_feats, fake_feats, config_.gdpp.variant, config_.gdpp.options);
    gdpp_value = diversity.scalar_value();
    loss = tape.add(adv, diversity);
  }
  if (!std::isfinite(loss.scalar_value()))
    throw TrainAbort(iteration_ + 1, "g_adv=" + fmt_loss(adv.scalar_value()) +
                                         ", gdpp=" + fmt_loss(gdpp_value));

  GradientMap grads = tape.backward(loss);
  g_adam_.step(gan_->generator.blocks(), g_params, grads);
  ++iteration_;
}

Tensor GanTrainer::eval_samples(int n, int checkpoint_index) const {
  Rng rng(derive_seed(derive_seed(config_.seed, kStreamEval),
                      static_cast<std::uint64_t>(checkpoint_index)));
  Tensor z = rng.gaussian_matrix(config_.noise_dim, n);
  return transpose_pure(gan_->generator.forward_pure(z).output);
}

MetricsRecord GanTrainer::evaluate(int checkpoint_index, double wall_seconds,
                                   bool with_ivo) const {
  MetricsRecord rec = make_record(eval_samples(config_.eval_samples, checkpoint_index),
                                  spec_, iteration_, wall_seconds);
  if (with_ivo) {
    Rng rng(derive_seed(config_.seed, kStreamIvo));
    Tensor targets = sample(spec_, config_.ivo_targets, rng).samples;
    const Mlp& g = gan_->generator;
    IvoOptions opt = config_.ivo;
    opt.seed = derive_seed(config_.seed, kStreamIvo + 1);
    rec.ivo_mse = ivo(targets,
                      [&g](Tape& t, const Tensor& z) {
                        return g.forward(t, g.constant_params(), z).output;
                      },
                      config_.noise_dim, opt)
                      .mean_mse;
  }
  return rec;
}

Checkpoint GanTrainer::checkpoint() const {
  Checkpoint ckpt;
  ckpt.meta["model"] = "gan";
  ckpt.meta["benchmark"] = to_string(config_.benchmark);
  ckpt.meta["data_dim"] = std::to_string(spec_.ambient_dim);
  ckpt.meta["noise_dim"] = std::to_string(config_.noise_dim);
  ckpt.meta["hidden"] = std::to_string(config_.hidden);
  ckpt.meta["seed"] = std::to_string(config_.seed);
  ckpt.meta["iterations"] = std::to_string(iteration_);
  ckpt.blocks = gan_->generator.blocks();
  for (const auto& blk : gan_->discriminator.blocks()) ckpt.blocks.push_back(blk);
  return ckpt;
}

// ---------------------------------------------------------------------------
// VAE

VaeTrainer::VaeTrainer(const TrainConfig& config)
    : config_(config),
      spec_(make_benchmark(config.benchmark, config.sigma_override, config.mixture_seed)),
      enc_adam_(config.vae_opt),
      dec_adam_(config.vae_opt),
      rng_data_(derive_seed(config.seed, kStreamData)),
      rng_eps_(derive_seed(config.seed, kStreamEps)) {
  config_.validate();
  VaeConfig vc;
  vc.data_dim = spec_.ambient_dim;
  vc.latent_dim = config_.vae_latent > 0 ? config_.vae_latent
                                         : default_vae_latent(config_.benchmark);
  vc.hidden = config_.hidden;
  vc.seed = derive_seed(config_.seed, kStreamInit);
  nets_ = std::make_unique<VaeNets>(make_vae(vc));
  config_.vae_latent = vc.latent_dim;
}

void VaeTrainer::step() {
  const int b = config_.batch;
  Tensor x = sample_batch_cols(spec_, b, rng_data_);

  Tape tape;
  std::vector<Tensor> enc_params = nets_->encoder.bind(tape);
  std::vector<Tensor> dec_params = nets_->decoder.bind(tape);
  VaeForward fwd = vae_forward(tape, *nets_, enc_params, dec_params, x, rng_eps_);

  Tensor residual = tape.sub(x, fwd.reconstruction);
  Tensor recon = tape.mul_scalar(tape.sum(tape.mul(residual, residual)), 1.0 / b);
  Tensor kl = vae_kl(tape, fwd.mu, fwd.log_var);
  Tensor loss = tape.add(recon, kl);

  double gdpp_value = 0.0;
  if (config_.gdpp.enabled) {
    Tensor real_hidden = nets_->encoder.forward_pure(x).last_hidden;
    FeatureBatch real_feats = extract_features(tape, real_hidden, Origin::real);
    Tensor fake_x = fwd.reconstruction;
    if (config_.vae_fake_from_prior) {
      Tensor z_prior = rng_eps_.gaussian_matrix(config_.vae_latent, b);
      fake_x = nets_->decoder.forward(tape, dec_params, z_prior).output;
    }
    Tensor fake_hidden = nets_->encoder.forward(tape, enc_params, fake_x).last_hidden;
    FeatureBatch fake_feats = extract_features(tape, fake_hidden, Origin::fake);
    Tensor diversity =
        gdpp_loss(tape, real_feats, fake_feats, config_.gdpp.variant, config_.gdpp.options);
    gdpp_value = diversity.scalar_value();
    loss = tape.add(loss, diversity);
  }

  last_recon_ = recon.scalar_value();
  last_kl_ = kl.scalar_value();
  if (!std::isfinite(loss.scalar_value()))
    throw TrainAbort(iteration_ + 1, "recon=" + fmt_loss(last_recon_) +
                                         ", kl=" + fmt_loss(last_kl_) +
                                         ", gdpp=" + fmt_loss(gdpp_value));

  GradientMap grads = tape.backward(loss);
  enc_adam_.step(nets_->encoder.blocks(), enc_params, grads);
  dec_adam_.step(nets_->decoder.blocks(), dec_params, grads);
  ++iteration_;
}

Tensor VaeTrainer::eval_samples(int n, int checkpoint_index) const {
  Rng rng(derive_seed(derive_seed(config_.seed, kStreamEval),
                      static_cast<std::uint64_t>(checkpoint_index)));
  Tensor z = rng.gaussian_matrix(config_.vae_latent, n);
  return transpose_pure(nets_->decoder.forward_pure(z).output);
}

MetricsRecord VaeTrainer::evaluate(int checkpoint_index, double wall_seconds,
                                   bool with_ivo) const {
  MetricsRecord rec = make_record(eval_samples(config_.eval_samples, checkpoint_index),
                                  spec_, iteration_, wall_seconds);
  if (with_ivo) {
    Rng rng(derive_seed(config_.seed, kStreamIvo));
    Tensor targets = sample(spec_, config_.ivo_targets, rng).samples;
    const Mlp& dec = nets_->decoder;
    IvoOptions opt = config_.ivo;
    opt.seed = derive_seed(config_.seed, kStreamIvo + 1);
    rec.ivo_mse = ivo(targets,
                      [&dec](Tape& t, const Tensor& z) {
                        return dec.forward(t, dec.constant_params(), z).output;
                      },
                      config_.vae_latent, opt)
                      .mean_mse;
  }
  return rec;
}

Checkpoint VaeTrainer::checkpoint() const {
  Checkpoint ckpt;
  ckpt.meta["model"] = "vae";
  ckpt.meta["benchmark"] = to_string(config_.benchmark);
  ckpt.meta["data_dim"] = std::to_string(spec_.ambient_dim);
  ckpt.meta["latent_dim"] = std::to_string(config_.vae_latent);
  ckpt.meta["hidden"] = std::to_string(config_.hidden);
  ckpt.meta["seed"] = std::to_string(config_.seed);
  ckpt.meta["iterations"] = std::to_string(iteration_);
  ckpt.blocks = nets_->encoder.blocks();
  for (const auto& blk : nets_->decoder.blocks()) ckpt.blocks.push_back(blk);
  return ckpt;
}

// ---------------------------------------------------------------------------
// Run drivers

namespace {

template <typename Trainer>
RunResult run_training(const TrainConfig& config) {
  config.validate();
  Trainer trainer(config);
  const int total_checkpoints = config.eval_every > 0 ? config.iterations / config.eval_every : 0;

  RunResult result;
  result.series.reserve(static_cast<std::size_t>(total_checkpoints) + 1);
  result.series.push_back(
      trainer.evaluate(0, 0.0, config.eval_ivo && total_checkpoints == 0));

  double train_seconds = 0.0;
  for (int it = 1; it <= config.iterations; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    trainer.step();
    const auto t1 = std::chrono::steady_clock::now();
    train_seconds += std::chrono::duration<double>(t1 - t0).count();
    if (it % config.eval_every == 0) {
      const int index = it / config.eval_every;
      result.series.push_back(
          trainer.evaluate(index, train_seconds, config.eval_ivo && index == total_checkpoints));
    }
  }
  result.avg_iter_seconds = config.iterations > 0 ? train_seconds / config.iterations : 0.0;
  result.checkpoint = trainer.checkpoint();
  return result;
}

}  // namespace

RunResult train_gan(const TrainConfig& config) { return run_training<GanTrainer>(config); }
RunResult train_vae(const TrainConfig& config) { return run_training<VaeTrainer>(config); }

RunResult train(const TrainConfig& config) {
  return config.model == ModelKind::gan ? train_gan(config) : train_vae(config);
}

std::vector<BatchSweepEntry> sweep_batch_size(const TrainConfig& config,
                                              const std::vector<int>& sizes, int workers) {
  std::vector<BatchSweepEntry> out(sizes.size());
  run_parallel(workers, static_cast<int>(sizes.size()), [&](int i) {
    TrainConfig cfg = config;
    cfg.batch = sizes[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {cfg.batch, train(cfg)};
  });
  return out;
}

RunResult sweep_iterations(const TrainConfig& config, int batch) {
  TrainConfig cfg = config;
  cfg.batch = batch;
  return train(cfg);
}

}  // namespace gdpp
