// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/models.hpp"

#include "gdpp/errors.hpp"

namespace gdpp {

GanPair make_gan(const GanConfig& cfg) {
  MlpSpec g;
  g.widths = {cfg.noise_dim, cfg.hidden, cfg.hidden, cfg.data_dim};
  g.init_seed = derive_seed(cfg.seed, 0x67656e /* "gen" */);
  MlpSpec d;
  d.widths = {cfg.data_dim, cfg.hidden, cfg.hidden, 1};
  d.init_seed = derive_seed(cfg.seed, 0x646973 /* "dis" */);
  return GanPair{Mlp(std::move(g), "g"), Mlp(std::move(d), "d")};
}

Tensor generator_forward(Tape& tape, const Mlp& g, std::span<const Tensor> params,
                         const Tensor& z) {
  if (!z.all_finite()) throw Error("generator_forward: non-finite noise input");
  return g.forward(tape, params, z).output;
}

DiscriminatorOut discriminator_forward(Tape& tape, const Mlp& d,
                                       std::span<const Tensor> params, const Tensor& x) {
  auto fwd = d.forward(tape, params, x);
  return {fwd.output, fwd.last_hidden};
}

VaeNets make_vae(const VaeConfig& cfg) {
  MlpSpec enc;
  enc.widths = {cfg.data_dim, cfg.hidden, cfg.hidden, 2 * cfg.latent_dim};
  enc.init_seed = derive_seed(cfg.seed, 0x656e63 /* "enc" */);
  MlpSpec dec;
  dec.widths = {cfg.latent_dim, cfg.hidden, cfg.hidden, cfg.data_dim};
  dec.init_seed = derive_seed(cfg.seed, 0x646563 /* "dec" */);
  return VaeNets{Mlp(std::move(enc), "enc"), Mlp(std::move(dec), "dec"), cfg.latent_dim};
}

VaeForward vae_forward(Tape& tape, const VaeNets& nets,
                       std::span<const Tensor> enc_params,
                       std::span<const Tensor> dec_params, const Tensor& x, Rng& rng) {
  auto enc = nets.encoder.forward(tape, enc_params, x);
  const int latent = nets.latent_dim;
  Tensor mu = tape.slice_rows(enc.output, 0, latent);
  Tensor log_var = tape.slice_rows(enc.output, latent, 2 * latent);

  Tensor eps = rng.gaussian_matrix(latent, x.cols());
  Tensor sigma = tape.exp(tape.mul_scalar(log_var, 0.5));
  Tensor z = tape.add(mu, tape.mul(sigma, eps));

  Tensor xhat = nets.decoder.forward(tape, dec_params, z).output;
  return {xhat, mu, log_var, enc.last_hidden, z};
}

Tensor vae_kl(Tape& tape, const Tensor& mu, const Tensor& log_var) {
  // 0.5 * (mu^2 + exp(log_var) - log_var - 1), summed over latents,
  // averaged over the batch.
  Tensor term = tape.sub(tape.sub(tape.add(tape.mul(mu, mu), tape.exp(log_var)), log_var),
                         Tensor::scalar(1.0));
  return tape.mul_scalar(tape.sum(term), 0.5 / mu.cols());
}

}  // namespace gdpp
