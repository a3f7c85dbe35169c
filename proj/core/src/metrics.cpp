// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/metrics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <json.hpp>
#include "hamrom/errors.hpp"

namespace hamrom
{

double PointwiseMaxError(const Vector &z_h, const Vector &z_r, Index n_u)
{
  detail::CheckDim(z_r.size(), z_h.size(), "PointwiseMaxError reconstruction");
  const Index n_v = z_h.size() - n_u;
  if (n_v != n_u)
  {
    throw DimensionError("PointwiseMaxError: u and v blocks differ in length");
  }
  const Vector diff = z_h - z_r;
  return (diff.head(n_u).array().square() + diff.tail(n_v).array().square())
      .sqrt()
      .maxCoeff();
}

double EInf(const Trajectory &fom, const Trajectory &rom_coeffs, const ReducedModel &model)
{
  detail::CheckDim(static_cast<std::ptrdiff_t>(rom_coeffs.size()),
                   static_cast<std::ptrdiff_t>(fom.size()), "EInf step count");
  double worst = 0.0;
  for (std::size_t k = 0; k < fom.size(); k++)
  {
    const Vector z_r = model.Reconstruct(rom_coeffs.states[k]);
    worst = std::max(worst, PointwiseMaxError(fom.states[k], z_r, model.ops().n_u));
  }
  return worst;
}

double EInf(TrajectoryReader &fom, const Trajectory &rom_coeffs, const ReducedModel &model,
            const std::function<void(std::size_t k, const Vector &z_h)> &visit)
{
  detail::CheckDim(static_cast<std::ptrdiff_t>(rom_coeffs.size()),
                   static_cast<std::ptrdiff_t>(fom.count()), "EInf step count");
  detail::CheckDim(fom.dim(), model.full_dim(), "EInf full-order state");
  double worst = 0.0;
  Vector z_h;
  std::size_t k = 0;
  while (fom.Next(z_h))
  {
    if (visit)
    {
      visit(k, z_h);
    }
    const Vector z_r = model.Reconstruct(rom_coeffs.states[k++]);
    worst = std::max(worst, PointwiseMaxError(z_h, z_r, model.ops().n_u));
  }
  return worst;
}

HamiltonianSeries ComputeHamiltonianSeries(const std::function<double(const Vector &)> &h,
                                           const Trajectory &traj, double dx,
                                           const std::vector<double> &h_fom_dx)
{
  if (h_fom_dx.size() != 1 && h_fom_dx.size() != traj.size())
  {
    throw DimensionError("ComputeHamiltonianSeries: need one full-order energy or one per step");
  }
  HamiltonianSeries series;
  series.times = traj.times;
  series.values.reserve(traj.size());
  for (const auto &x : traj.states)
  {
    series.values.push_back(h(x) * dx);
  }
  if (series.values.empty())
  {
    return series;
  }
  const double h0 = series.values.front();
  series.offsets.reserve(series.values.size());
  for (std::size_t k = 0; k < series.values.size(); k++)
  {
    const double v = series.values[k];
    const double ref = h_fom_dx.size() == 1 ? h_fom_dx.front() : h_fom_dx[k];
    series.offsets.push_back(v - ref);
    series.offset_max = std::max(series.offset_max, std::abs(v - ref));
    series.drift_max = std::max(series.drift_max, std::abs(v - h0));
  }
  return series;
}

std::string ToJson(const RunReport &report, int indent)
{
  nlohmann::ordered_json j;
  j["variant"] = report.variant;
  j["r"] = report.r;
  j["s"] = report.s;
  j["e_inf"] = report.e_inf;
  j["h_offset_max"] = report.h_offset_max;
  j["h_drift_max"] = report.h_drift_max;
  j["online_seconds"] = report.online_seconds;
  j["steps"] = report.steps;
  j["picard_avg_iters"] = report.picard_avg_iters;
  return j.dump(indent);
}

RunReport RunReportFromJson(const std::string &text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::exception &e)
  {
    throw FormatError(std::string("run report: ") + e.what());
  }
  RunReport report;
  try
  {
    report.variant = j.at("variant").get<std::string>();
    report.r = j.at("r").get<Index>();
    report.s = j.at("s").get<Index>();
    report.e_inf = j.at("e_inf").get<double>();
    report.h_offset_max = j.at("h_offset_max").get<double>();
    report.h_drift_max = j.at("h_drift_max").get<double>();
    report.online_seconds = j.at("online_seconds").get<double>();
    report.steps = j.at("steps").get<std::size_t>();
    report.picard_avg_iters = j.at("picard_avg_iters").get<double>();
  }
  catch (const nlohmann::json::exception &e)
  {
    throw FormatError(std::string("run report: ") + e.what());
  }
  return report;
}

void WriteSeriesCsv(const std::filesystem::path &path, const std::vector<double> &t,
                    const std::vector<double> &value)
{
  detail::CheckDim(static_cast<std::ptrdiff_t>(value.size()),
                   static_cast<std::ptrdiff_t>(t.size()), "series CSV values");
  std::ofstream out(path);
  if (!out)
  {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << "t,value\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < t.size(); k++)
  {
    out << t[k] << ',' << value[k] << '\n';
  }
  if (!out)
  {
    throw IoError("write failed on " + path.string());
  }
}

}  // namespace hamrom
