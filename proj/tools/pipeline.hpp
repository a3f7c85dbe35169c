// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_TOOLS_PIPELINE_HPP
#define HAMROM_TOOLS_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>
#include "hamrom/integrator.hpp"
#include "hamrom/metrics.hpp"
#include "hamrom/wave.hpp"

namespace hamrom::pipeline
{

// Defaults reproduce the nonlinear-wave benchmark: n = 500, dt = 0.01, t_final = 50,
// snapshots every 50 steps, r in {10, 20}, s = 2r, all five variants.
struct PipelineConfig
{
  WaveConfig wave;
  IntegratorConfig integrator;
  std::size_t stride = 50;
  std::vector<Index> ranks = {10, 20};
  Index deim_mult = 2;
  std::vector<std::string> variants = {"g-rom", "sp-pod-1", "sp-pod-2", "sp-deim-1",
                                       "sp-deim-2"};
  std::filesystem::path out = "hamrom_out";
  int jobs = 1;
  bool quiet = false;

  // Throws ConfigError.
  void Validate() const;
};

struct FomResult
{
  std::filesystem::path trajectory;
  Index n = 0;
  double dx = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double h_dx = 0.0;        // H(z0) dx
  double h_drift_max = 0.0; // max_k |H(z_k) - H(z0)| dx
  double online_seconds = 0.0;
  double picard_avg_iters = 0.0;
};

// Integrates the full-order wave model and writes <out>/fom/{trajectory.hrtraj,
// h_series.csv, summary.json}.
FomResult CmdFom(const PipelineConfig &cfg);

struct RomArtifact
{
  std::string variant;
  Index r = 0;
  std::filesystem::path path;
};

// Snapshots, POD bases, DEIM models and one ROM artifact per (variant, r) under
// <out>/offline. Returns the artifacts in (r, variant) order.
std::vector<RomArtifact> CmdOffline(const PipelineConfig &cfg,
                                    const std::filesystem::path &trajectory);

// Runs one ROM artifact online against the stored full-order trajectory and writes
// <out>/online/r<r>/<variant>.json plus the Hamiltonian series CSVs.
RunReport CmdOnline(const PipelineConfig &cfg, const std::filesystem::path &artifact,
                    const std::filesystem::path &trajectory);

struct ReproduceResult
{
  FomResult fom;
  std::vector<RunReport> runs;
  std::string table;
  std::string json;
};

// Full pipeline; also writes <out>/reproduce.json and <out>/table.txt.
ReproduceResult CmdReproduce(const PipelineConfig &cfg);

// One block per r: variants as columns; E_inf, max |H_r dx - H dx| and t_cpu as rows.
std::string FormatTable(const std::vector<RunReport> &runs);

std::string FomSummaryJson(const FomResult &fom);

}  // namespace hamrom::pipeline

#endif  // HAMROM_TOOLS_PIPELINE_HPP
