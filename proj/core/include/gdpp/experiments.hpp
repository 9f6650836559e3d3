// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gdpp/train.hpp"

namespace gdpp {

/// Reference results for the standard synthetic protocol (modes captured and
/// % high-quality samples), reported alongside our measurements.
struct ReferenceValue {
  double modes = 0.0;
  double hq_pct = 0.0;
};

ReferenceValue table1_reference(bool gdpp_enabled, Benchmark b);
ReferenceValue ablation_reference(GdppVariant v, Benchmark b);

struct CellResult {
  std::string method;
  std::string benchmark;
  std::vector<double> modes;   // per seed, final checkpoint
  std::vector<double> hq;      // per seed, fraction in [0, 1]
  double mean_modes = 0.0;
  double median_modes = 0.0;
  double mean_hq = 0.0;
  ReferenceValue reference;
  bool failed = false;
  std::string error;
};

struct ExperimentOptions {
  int seeds = 5;
  std::uint64_t base_seed = 0;
  int workers = 1;
  /// When non-empty, per-run metrics/summary files land under
  /// <out_dir>/cells/<method>-<benchmark>-s<seed>/.
  std::string out_dir;
  std::string manifest_hash;
};

/// {gan, gdpp-gan} x {ring, grid, highdim}; per-cell seed averages next to
/// the reference numbers. Failed cells are marked, the table is still built.
std::vector<CellResult> run_table1(const TrainConfig& base, const ExperimentOptions& options);

/// Five loss variants x {ring, grid} on the GAN.
std::vector<CellResult> run_ablation(const TrainConfig& base, const ExperimentOptions& options);

void write_cells_csv(const std::string& path, const std::vector<CellResult>& cells,
                     const std::string& manifest_hash);
std::string render_cells_table(const std::vector<CellResult>& cells);

double mean_of(const std::vector<double>& v);
double median_of(std::vector<double> v);

}  // namespace gdpp
