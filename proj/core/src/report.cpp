// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gdpp/errors.hpp"

namespace gdpp {

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const std::map<std::string, std::string>& kv) {
  std::string canonical;
  for (const auto& [k, v] : kv) {
    canonical += k;
    canonical += '=';
    canonical += v;
    canonical += '\n';
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

std::map<std::string, std::string> config_snapshot(const TrainConfig& config) {
  std::map<std::string, std::string> kv;
  kv["benchmark"] = to_string(config.benchmark);
  kv["model"] = config.model == ModelKind::gan ? "gan" : "vae";
  kv["gdpp"] = config.gdpp.enabled ? to_string(config.gdpp.variant) : "off";
  kv["gdpp_magnitude_mse"] = config.gdpp.options.magnitude_mse ? "1" : "0";
  kv["gdpp_abs_cosine"] = config.gdpp.options.abs_cosine ? "1" : "0";
  kv["iterations"] = std::to_string(config.iterations);
  kv["batch"] = std::to_string(config.batch);
  kv["eval_every"] = std::to_string(config.eval_every);
  kv["eval_samples"] = std::to_string(config.eval_samples);
  kv["gen_loss"] =
      config.gen_loss == GenLossForm::non_saturating ? "nonsaturating" : "saturating";
  kv["noise_dim"] = std::to_string(config.noise_dim);
  kv["hidden"] = std::to_string(config.hidden);
  kv["vae_latent"] = std::to_string(config.vae_latent);
  kv["vae_fake_from_prior"] = config.vae_fake_from_prior ? "1" : "0";
  kv["g_lr"] = full_precision(config.g_opt.lr);
  kv["g_beta1"] = full_precision(config.g_opt.beta1);
  kv["d_lr"] = full_precision(config.d_opt.lr);
  kv["d_beta1"] = full_precision(config.d_opt.beta1);
  kv["vae_lr"] = full_precision(config.vae_opt.lr);
  kv["vae_beta1"] = full_precision(config.vae_opt.beta1);
  kv["sigma_override"] = full_precision(config.sigma_override);
  kv["mixture_seed"] = std::to_string(config.mixture_seed);
  kv["eval_ivo"] = config.eval_ivo ? "1" : "0";
  return kv;
}

RunManifest make_manifest(const TrainConfig& config, std::vector<std::uint64_t> seeds,
                          const std::string& out_root, const std::string& kind) {
  RunManifest m;
  m.config = config_snapshot(config);
  m.config["kind"] = kind;
  m.seeds = std::move(seeds);
  std::string seed_list;
  for (std::size_t i = 0; i < m.seeds.size(); ++i) {
    if (i) seed_list += ",";
    seed_list += std::to_string(m.seeds[i]);
  }
  m.config["seeds"] = seed_list;
  m.hash = config_hash(m.config);
  m.out_dir = out_root + "/" + kind + "-" + m.hash.substr(0, 12);
  return m;
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["hash"] = manifest.hash;
  j["out_dir"] = manifest.out_dir;
  j["seeds"] = manifest.seeds;
  j["config"] = manifest.config;
  std::ofstream out(path);
  if (!out) throw ConfigError("save_manifest: cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records,
                       const std::string& manifest_hash) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_metrics_csv: cannot write " + path);
  out << "# manifest " << manifest_hash << "\n";
  out << "iteration,modes_captured,hq_fraction,mode_kl,ivo_mse,wall_seconds\n";
  for (const auto& r : records) {
    out << r.iteration << "," << r.modes_captured << "," << full_precision(r.hq_fraction)
        << "," << full_precision(r.mode_kl) << ",";
    if (r.ivo_mse) out << full_precision(*r.ivo_mse);
    out << "," << full_precision(r.wall_seconds) << "\n";
  }
}

std::vector<MetricsRecord> parse_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("parse_metrics_csv: cannot read " + path);
  std::vector<MetricsRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("iteration,", 0) == 0) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    while (fields.size() < 6) fields.emplace_back();
    MetricsRecord r;
    r.iteration = std::stoll(fields[0]);
    r.modes_captured = std::stoi(fields[1]);
    r.hq_fraction = std::strtod(fields[2].c_str(), nullptr);
    r.mode_kl = std::strtod(fields[3].c_str(), nullptr);
    if (!fields[4].empty()) r.ivo_mse = std::strtod(fields[4].c_str(), nullptr);
    r.wall_seconds = std::strtod(fields[5].c_str(), nullptr);
    records.push_back(r);
  }
  return records;
}

void write_summary_json(const std::string& path, const TrainConfig& config,
                        const RunResult& result, const std::string& manifest_hash) {
  nlohmann::json j;
  j["manifest"] = manifest_hash;
  j["seed"] = config.seed;
  j["avg_iter_seconds"] = result.avg_iter_seconds;
  j["checkpoints"] = result.series.size();
  j["config"] = config_snapshot(config);
  const MetricsRecord& last = result.series.back();
  nlohmann::json f;
  f["iteration"] = last.iteration;
  f["modes_captured"] = last.modes_captured;
  f["hq_fraction"] = last.hq_fraction;
  f["mode_kl"] = last.mode_kl;
  if (last.ivo_mse) f["ivo_mse"] = *last.ivo_mse;
  f["wall_seconds"] = last.wall_seconds;
  j["final"] = f;
  std::ofstream out(path);
  if (!out) throw ConfigError("write_summary_json: cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace gdpp
