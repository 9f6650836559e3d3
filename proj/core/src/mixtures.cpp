// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/mixtures.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "gdpp/errors.hpp"

namespace gdpp {

namespace {

double center_distance(const Tensor& centers, int i, int j) {
  double s = 0.0;
  for (int d = 0; d < centers.cols(); ++d) {
    const double diff = centers.at(i, d) - centers.at(j, d);
    s += diff * diff;
  }
  return std::sqrt(s);
}

}  // namespace

void MixtureSpec::validate() const {
  if (modes() < 1) throw ConfigError("mixture '" + name + "': needs at least one mode");
  if (sigma <= 0.0) throw ConfigError("mixture '" + name + "': sigma must be positive");
  if (mode_centers.cols() != ambient_dim)
    throw ConfigError("mixture '" + name + "': center dimension mismatch");
  const double min_sep = 2.0 * hq_threshold_sigmas * sigma;
  for (int i = 0; i < modes(); ++i)
    for (int j = i + 1; j < modes(); ++j)
      if (center_distance(mode_centers, i, j) <= min_sep)
        throw ConfigError("mixture '" + name + "': modes " + std::to_string(i) + " and " +
                          std::to_string(j) + " closer than 2 * " +
                          std::to_string(hq_threshold_sigmas) + " sigma");
}

MixtureSpec make_ring(double radius, double sigma) {
  MixtureSpec spec;
  spec.name = "ring";
  spec.ambient_dim = 2;
  spec.sigma = sigma;
  spec.hq_threshold_sigmas = 3.0;
  spec.mode_centers = Tensor(8, 2);
  for (int k = 0; k < 8; ++k) {
    const double angle = 2.0 * M_PI * k / 8.0;
    spec.mode_centers.at(k, 0) = radius * std::cos(angle);
    spec.mode_centers.at(k, 1) = radius * std::sin(angle);
  }
  spec.validate();
  return spec;
}

MixtureSpec make_grid(double half_span, double sigma) {
  MixtureSpec spec;
  spec.name = "grid";
  spec.ambient_dim = 2;
  spec.sigma = sigma;
  spec.hq_threshold_sigmas = 3.0;
  spec.mode_centers = Tensor(25, 2);
  const double spacing = 2.0 * half_span / 4.0;
  int m = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j, ++m) {
      spec.mode_centers.at(m, 0) = -half_span + spacing * i;
      spec.mode_centers.at(m, 1) = -half_span + spacing * j;
    }
  spec.validate();
  return spec;
}

MixtureSpec make_highdim(std::uint64_t seed) {
  constexpr int kModes = 10;
  constexpr int kLatent = 10;
  constexpr int kAmbient = 1200;
  constexpr double kMinSeparationSigmas = 25.0;

  MixtureSpec spec;
  spec.name = "highdim";
  spec.ambient_dim = kAmbient;
  spec.sigma = 1.0;
  spec.hq_threshold_sigmas = 10.0;
  spec.seed = seed;

  Rng rng(derive_seed(seed, 0x686967 /* "hig" */));
  Tensor latent = rng.gaussian_matrix(kModes, kLatent);

  double min_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kModes; ++i)
    for (int j = i + 1; j < kModes; ++j)
      min_dist = std::min(min_dist, center_distance(latent, i, j));
  const double scale = kMinSeparationSigmas * spec.sigma / min_dist;
  if (scale > 1.0)
    for (std::int64_t i = 0; i < latent.size(); ++i) latent[i] *= scale;

  // Orthonormal-column embedding via modified Gram-Schmidt on gaussian draws.
  Tensor embedding = rng.gaussian_matrix(kAmbient, kLatent);
  for (int c = 0; c < kLatent; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      double proj = 0.0;
      for (int r = 0; r < kAmbient; ++r) proj += embedding.at(r, c) * embedding.at(r, prev);
      for (int r = 0; r < kAmbient; ++r) embedding.at(r, c) -= proj * embedding.at(r, prev);
    }
    double norm = 0.0;
    for (int r = 0; r < kAmbient; ++r) norm += embedding.at(r, c) * embedding.at(r, c);
    norm = std::sqrt(norm);
    for (int r = 0; r < kAmbient; ++r) embedding.at(r, c) /= norm;
  }

  spec.latent_centers = latent;
  spec.embedding = embedding;
  spec.mode_centers = matmul_pure(latent, transpose_pure(embedding));  // M x ambient
  spec.validate();
  return spec;
}

SampleSet sample(const MixtureSpec& spec, int n, Rng& rng) {
  if (n < 1) throw ConfigError("sample: n must be >= 1");
  const int latent_dim = spec.latent_centers ? spec.latent_centers->cols() : spec.ambient_dim;

  SampleSet out;
  out.samples = Tensor(n, spec.ambient_dim);
  out.labels.resize(static_cast<std::size_t>(n));
  std::vector<double> point(static_cast<std::size_t>(latent_dim));
  for (int s = 0; s < n; ++s) {
    const int mode = rng.uniform_int(spec.modes());
    out.labels[static_cast<std::size_t>(s)] = mode;
    if (spec.embedding) {
      for (int d = 0; d < latent_dim; ++d)
        point[static_cast<std::size_t>(d)] =
            spec.latent_centers->at(mode, d) + spec.sigma * rng.gaussian();
      // x = E * (c + sigma g)
      for (int r = 0; r < spec.ambient_dim; ++r) {
        double v = 0.0;
        for (int d = 0; d < latent_dim; ++d)
          v += spec.embedding->at(r, d) * point[static_cast<std::size_t>(d)];
        out.samples.at(s, r) = v;
      }
    } else {
      for (int d = 0; d < spec.ambient_dim; ++d)
        out.samples.at(s, d) = spec.mode_centers.at(mode, d) + spec.sigma * rng.gaussian();
    }
  }
  return out;
}

Tensor sample_batch_cols(const MixtureSpec& spec, int batch, Rng& rng) {
  return transpose_pure(sample(spec, batch, rng).samples);
}

namespace {

nlohmann::json tensor_to_json(const Tensor& t) {
  nlohmann::json j;
  j["rows"] = t.rows();
  j["cols"] = t.cols();
  j["values"] = std::vector<double>(t.values().begin(), t.values().end());
  return j;
}

Tensor tensor_from_json(const nlohmann::json& j) {
  return Tensor(j.at("rows").get<int>(), j.at("cols").get<int>(),
                j.at("values").get<std::vector<double>>());
}

}  // namespace

void save_mixture(const MixtureSpec& spec, const std::string& path) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["ambient_dim"] = spec.ambient_dim;
  j["sigma"] = spec.sigma;
  j["hq_threshold_sigmas"] = spec.hq_threshold_sigmas;
  j["seed"] = spec.seed;
  j["mode_centers"] = tensor_to_json(spec.mode_centers);
  if (spec.embedding) j["embedding"] = tensor_to_json(*spec.embedding);
  if (spec.latent_centers) j["latent_centers"] = tensor_to_json(*spec.latent_centers);
  std::ofstream out(path);
  if (!out) throw ConfigError("save_mixture: cannot write " + path);
  out << j.dump(2) << "\n";
}

MixtureSpec load_mixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_mixture: cannot read " + path);
  nlohmann::json j;
  in >> j;
  MixtureSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.ambient_dim = j.at("ambient_dim").get<int>();
  spec.sigma = j.at("sigma").get<double>();
  spec.hq_threshold_sigmas = j.at("hq_threshold_sigmas").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.mode_centers = tensor_from_json(j.at("mode_centers"));
  if (j.contains("embedding")) spec.embedding = tensor_from_json(j.at("embedding"));
  if (j.contains("latent_centers")) spec.latent_centers = tensor_from_json(j.at("latent_centers"));
  spec.validate();
  return spec;
}

std::optional<Benchmark> benchmark_from_string(const std::string& name) {
  if (name == "ring") return Benchmark::ring;
  if (name == "grid") return Benchmark::grid;
  if (name == "highdim") return Benchmark::highdim;
  return std::nullopt;
}

std::string to_string(Benchmark b) {
  switch (b) {
    case Benchmark::ring: return "ring";
    case Benchmark::grid: return "grid";
    case Benchmark::highdim: return "highdim";
  }
  return "ring";
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"ring", "grid", "highdim"};
  return names;
}

MixtureSpec make_benchmark(Benchmark b, double sigma_override, std::uint64_t spec_seed) {
  switch (b) {
    case Benchmark::ring:
      return make_ring(1.0, sigma_override > 0.0 ? sigma_override : 0.05);
    case Benchmark::grid:
      return make_grid(4.0, sigma_override > 0.0 ? sigma_override : 0.05);
    case Benchmark::highdim:
      return make_highdim(spec_seed);
  }
  throw ConfigError("make_benchmark: unknown benchmark");
}

}  // namespace gdpp
