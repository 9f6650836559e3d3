// Copyright 2026 The gdpp-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "gdpp/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "gdpp/errors.hpp"
#include "gdpp/parallel.hpp"
#include "gdpp/report.hpp"

namespace gdpp {

ReferenceValue table1_reference(bool gdpp_enabled, Benchmark b) {
  if (gdpp_enabled) {
    switch (b) {
      case Benchmark::ring: return {8.0, 71.7};
      case Benchmark::grid: return {24.8, 68.5};
      case Benchmark::highdim: return {7.4, 48.3};
    }
  }
  switch (b) {
    case Benchmark::ring: return {1.0, 99.3};
    case Benchmark::grid: return {3.3, 0.5};
    case Benchmark::highdim: return {1.6, 2.0};
  }
  return {};
}

ReferenceValue ablation_reference(GdppVariant v, Benchmark b) {
  const bool ring = (b == Benchmark::ring);
  switch (v) {
    case GdppVariant::exact_determinant: return ring ? ReferenceValue{8.0, 82.9} : ReferenceValue{12.6, 21.7};
    case GdppVariant::magnitude_only: return ring ? ReferenceValue{8.0, 67.0} : ReferenceValue{20.4, 15.9};
    case GdppVariant::structure_only: return ring ? ReferenceValue{8.0, 65.2} : ReferenceValue{18.2, 35.2};
    case GdppVariant::unnormalized_structure: return ring ? ReferenceValue{7.2, 81.2} : ReferenceValue{20.6, 68.8};
    case GdppVariant::full: return ring ? ReferenceValue{8.0, 71.7} : ReferenceValue{24.8, 68.5};
  }
  return {};
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

struct CellSpec {
  std::string method;
  TrainConfig config;
  ReferenceValue reference;
};

std::vector<CellResult> run_cells(const std::vector<CellSpec>& cells,
                                  const ExperimentOptions& options) {
  const int seeds = options.seeds;
  std::vector<CellResult> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    results[c].method = cells[c].method;
    results[c].benchmark = to_string(cells[c].config.benchmark);
    results[c].reference = cells[c].reference;
    results[c].modes.assign(static_cast<std::size_t>(seeds), 0.0);
    results[c].hq.assign(static_cast<std::size_t>(seeds), 0.0);
  }

  std::mutex io_mutex;
  const int jobs = static_cast<int>(cells.size()) * seeds;
  run_parallel(options.workers, jobs, [&](int job) {
    const std::size_t c = static_cast<std::size_t>(job) / seeds;
    const int s = job % seeds;
    TrainConfig cfg = cells[c].config;
    cfg.seed = options.base_seed + static_cast<std::uint64_t>(s);
    try {
      RunResult run = train(cfg);
      const MetricsRecord& last = run.series.back();
      results[c].modes[static_cast<std::size_t>(s)] = last.modes_captured;
      results[c].hq[static_cast<std::size_t>(s)] = last.hq_fraction;
      if (!options.out_dir.empty()) {
        const std::string dir = options.out_dir + "/cells/" + cells[c].method + "-" +
                                to_string(cfg.benchmark) + "-s" + std::to_string(cfg.seed);
        std::lock_guard<std::mutex> lock(io_mutex);
        std::filesystem::create_directories(dir);
        write_metrics_csv(dir + "/metrics.csv", run.series, options.manifest_hash);
        write_summary_json(dir + "/summary.json", cfg, run, options.manifest_hash);
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(io_mutex);
      results[c].failed = true;
      if (!results[c].error.empty()) results[c].error += "; ";
      results[c].error += "seed " + std::to_string(cfg.seed) + ": " + e.what();
    }
  });

  for (auto& r : results) {
    r.mean_modes = mean_of(r.modes);
    r.median_modes = median_of(r.modes);
    r.mean_hq = mean_of(r.hq);
  }
  return results;
}

}  // namespace

std::vector<CellResult> run_table1(const TrainConfig& base, const ExperimentOptions& options) {
  std::vector<CellSpec> cells;
  for (const bool gdpp_on : {false, true}) {
    for (const Benchmark b : {Benchmark::ring, Benchmark::grid, Benchmark::highdim}) {
      TrainConfig cfg = base;
      cfg.model = ModelKind::gan;
      cfg.benchmark = b;
      cfg.gdpp.enabled = gdpp_on;
      cfg.gdpp.variant = GdppVariant::full;
      cells.push_back({gdpp_on ? "gdpp-gan" : "gan", cfg, table1_reference(gdpp_on, b)});
    }
  }
  return run_cells(cells, options);
}

std::vector<CellResult> run_ablation(const TrainConfig& base, const ExperimentOptions& options) {
  static const GdppVariant kVariants[] = {
      GdppVariant::exact_determinant, GdppVariant::magnitude_only,
      GdppVariant::structure_only, GdppVariant::unnormalized_structure, GdppVariant::full};
  std::vector<CellSpec> cells;
  for (const GdppVariant v : kVariants) {
    for (const Benchmark b : {Benchmark::ring, Benchmark::grid}) {
      TrainConfig cfg = base;
      cfg.model = ModelKind::gan;
      cfg.benchmark = b;
      cfg.gdpp.enabled = true;
      cfg.gdpp.variant = v;
      cells.push_back({to_string(v), cfg, ablation_reference(v, b)});
    }
  }
  return run_cells(cells, options);
}

void write_cells_csv(const std::string& path, const std::vector<CellResult>& cells,
                     const std::string& manifest_hash) {
  std::ostringstream out;
  out << "# manifest " << manifest_hash << "\n";
  out << "method,benchmark,seeds,mean_modes,median_modes,mean_hq_pct,ref_modes,ref_hq_pct,"
         "status,error\n";
  for (const auto& c : cells) {
    out << c.method << "," << c.benchmark << "," << c.modes.size() << ","
        << full_precision(c.mean_modes) << "," << full_precision(c.median_modes) << ","
        << full_precision(100.0 * c.mean_hq) << "," << c.reference.modes << ","
        << c.reference.hq_pct << "," << (c.failed ? "failed" : "ok") << ",";
    std::string err = c.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << err << "\n";
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("write_cells_csv: cannot write " + path);
  file << out.str();
}

std::string render_cells_table(const std::vector<CellResult>& cells) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %-8s %12s %12s %12s %12s %8s\n", "method",
                "bench", "mean modes", "ref modes", "mean %HQ", "ref %HQ", "status");
  out << line;
  for (const auto& c : cells) {
    std::snprintf(line, sizeof(line), "%-12s %-8s %12.2f %12.1f %12.1f %12.1f %8s\n",
                  c.method.c_str(), c.benchmark.c_str(), c.mean_modes, c.reference.modes,
                  100.0 * c.mean_hq, c.reference.hq_pct, c.failed ? "failed" : "ok");
    out << line;
  }
  return out.str();
}

}  // namespace gdpp
