// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gdpp/metrics.hpp"
#include "gdpp/train.hpp"

namespace gdpp {

/// Content hash over the canonical key=value rendering of a config
/// (FNV-1a 64, hex). Identical configs hash identically, so re-runs land in
/// the same output directory.
std::uint64_t fnv1a64(const std::string& data);
std::string config_hash(const std::map<std::string, std::string>& kv);

/// Canonical key=value snapshot of a TrainConfig (seeds excluded where noted
/// by the caller).
std::map<std::string, std::string> config_snapshot(const TrainConfig& config);

struct RunManifest {
  std::map<std::string, std::string> config;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::string hash;  // config content hash; every emitted file references it
};

RunManifest make_manifest(const TrainConfig& config, std::vector<std::uint64_t> seeds,
                          const std::string& out_root, const std::string& kind);
void save_manifest(const RunManifest& manifest, const std::string& path);

/// metrics.csv: header comment carries the manifest hash; columns are
/// iteration, modes_captured, hq_fraction, mode_kl, ivo_mse, wall_seconds.
/// Floats use 17 significant digits so parse(emit(x)) == x exactly; an absent
/// ivo_mse is an empty field.
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records,
                       const std::string& manifest_hash);
std::vector<MetricsRecord> parse_metrics_csv(const std::string& path);

/// summary.json for one run: final metrics, avg iteration seconds, seed.
void write_summary_json(const std::string& path, const TrainConfig& config,
                        const RunResult& result, const std::string& manifest_hash);

std::string full_precision(double v);

}  // namespace gdpp
