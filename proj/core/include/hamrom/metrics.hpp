// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_METRICS_HPP
#define HAMROM_METRICS_HPP

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>
#include "hamrom/hamiltonian.hpp"
#include "hamrom/integrator.hpp"
#include "hamrom/rom.hpp"
#include "hamrom/snapshots.hpp"

namespace hamrom
{

// max_i sqrt((u_h - u_r)_i^2 + (v_h - v_r)_i^2) for states split as (u; v) with u of
// length n_u.
double PointwiseMaxError(const Vector &z_h, const Vector &z_r, Index n_u);

// Space-time maximum error between a full-order trajectory and the reconstruction of a
// reduced coefficient trajectory, over every stored step. Throws DimensionError on
// mismatched step counts.
double EInf(const Trajectory &fom, const Trajectory &rom_coeffs, const ReducedModel &model);

// Streaming variant reading the full-order states from a trajectory file. visit, when set,
// sees every full-order state once.
double EInf(TrajectoryReader &fom, const Trajectory &rom_coeffs, const ReducedModel &model,
            const std::function<void(std::size_t k, const Vector &z_h)> &visit = {});

struct HamiltonianSeries
{
  std::vector<double> times;
  std::vector<double> values;   // H_r(t_k) dx
  std::vector<double> offsets;  // H_r(t_k) dx - H(t_k) dx
  double offset_max = 0.0;      // max_k |H_r(t_k) dx - H(t_k) dx|
  double drift_max = 0.0;       // max_k |H_r(t_k) - H_r(t_0)| dx
};

// h_fom_dx holds the full-order H dx either once (a constant reference) or per stored step.
HamiltonianSeries ComputeHamiltonianSeries(const std::function<double(const Vector &)> &h,
                                           const Trajectory &traj, double dx,
                                           const std::vector<double> &h_fom_dx);

inline HamiltonianSeries ComputeHamiltonianSeries(const ReducedModel &model,
                                                  const Trajectory &coeffs, double dx,
                                                  const std::vector<double> &h_fom_dx)
{
  return ComputeHamiltonianSeries([&model](const Vector &x) { return model.Hamiltonian(x); },
                                  coeffs, dx, h_fom_dx);
}

// Wall-clock seconds spent in f().
template <typename F>
double TimeOnline(F &&f)
{
  const auto start = std::chrono::steady_clock::now();
  std::forward<F>(f)();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

struct RunReport
{
  std::string variant;
  Index r = 0;
  Index s = 0;
  double e_inf = 0.0;
  double h_offset_max = 0.0;
  double h_drift_max = 0.0;
  double online_seconds = 0.0;
  std::size_t steps = 0;
  double picard_avg_iters = 0.0;
  HamiltonianSeries h_series;  // not part of the JSON form
};

// JSON object with fields variant, r, s, e_inf, h_offset_max, h_drift_max, online_seconds,
// steps, picard_avg_iters.
std::string ToJson(const RunReport &report, int indent = 2);
RunReport RunReportFromJson(const std::string &text);

// Two-column CSV with header "t,value" and round-trip precision.
void WriteSeriesCsv(const std::filesystem::path &path, const std::vector<double> &t,
                    const std::vector<double> &value);

}  // namespace hamrom

#endif  // HAMROM_METRICS_HPP
