// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "gdpp/mlp.hpp"
#include "gdpp/rng.hpp"

namespace gdpp {

struct GanConfig {
  int data_dim = 2;
  int noise_dim = 64;
  int hidden = 128;
  std::uint64_t seed = 0;
};

/// Generator z -> data and discriminator data -> 1 logit, both with two
/// hidden layers; the discriminator's second hidden layer is the feature tap.
struct GanPair {
  Mlp generator;
  Mlp discriminator;
};

GanPair make_gan(const GanConfig& cfg);

Tensor generator_forward(Tape& tape, const Mlp& g, std::span<const Tensor> params,
                         const Tensor& z);

struct DiscriminatorOut {
  Tensor logits;    // 1 x B
  Tensor features;  // hidden x B, pre-normalization
};
DiscriminatorOut discriminator_forward(Tape& tape, const Mlp& d,
                                       std::span<const Tensor> params, const Tensor& x);

struct VaeConfig {
  int data_dim = 2;
  int latent_dim = 8;
  int hidden = 128;
  std::uint64_t seed = 0;
};

/// Encoder data -> (mu, log sigma^2) with a feature tap on its last hidden
/// layer; decoder latent -> data.
struct VaeNets {
  Mlp encoder;   // output rows: [mu; log sigma^2]
  Mlp decoder;
  int latent_dim = 0;
};

VaeNets make_vae(const VaeConfig& cfg);

struct VaeForward {
  Tensor reconstruction;  // d x B
  Tensor mu;              // L x B
  Tensor log_var;         // L x B
  Tensor features;        // hidden x B (encoder last hidden)
  Tensor z;               // L x B
};

/// Reparameterized forward pass: z = mu + exp(log_var / 2) * eps with
/// eps ~ N(0, I) drawn from `rng`.
VaeForward vae_forward(Tape& tape, const VaeNets& nets,
                       std::span<const Tensor> enc_params,
                       std::span<const Tensor> dec_params, const Tensor& x, Rng& rng);

/// KL(q(z|x) || N(0, I)) summed over latent dims, averaged over the batch.
Tensor vae_kl(Tape& tape, const Tensor& mu, const Tensor& log_var);

}  // namespace gdpp
