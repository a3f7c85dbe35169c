// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <json.hpp>
#include "hamrom/deim.hpp"
#include "hamrom/errors.hpp"
#include "hamrom/pod.hpp"
#include "hamrom/rom.hpp"
#include "hamrom/snapshots.hpp"

namespace hamrom::pipeline
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace
{

void Log(const PipelineConfig &cfg, const std::string &line)
{
  if (!cfg.quiet)
  {
    std::cerr << line << '\n';
  }
}

void EnsureDir(const fs::path &dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }
}

void WriteText(const fs::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out)
  {
    throw IoError("write failed on " + path.string());
  }
}

std::vector<double> ToStd(const Vector &v) { return {v.data(), v.data() + v.size()}; }

json ConfigJson(const PipelineConfig &cfg)
{
  json j;
  j["n"] = cfg.wave.n;
  j["c"] = cfg.wave.c_speed;
  j["length"] = cfg.wave.length;
  j["dt"] = cfg.integrator.dt;
  j["t_final"] = cfg.integrator.t_final;
  j["picard_tol"] = cfg.integrator.picard_tol;
  j["picard_max_iter"] = cfg.integrator.picard_max_iter;
  j["stride"] = cfg.stride;
  j["r"] = cfg.ranks;
  j["deim_mult"] = cfg.deim_mult;
  j["variants"] = cfg.variants;
  return j;
}

json ReportJson(const RunReport &report) { return json::parse(ToJson(report)); }

// Same grid and step on both sides, or the comparison is meaningless.
void CheckTrajectory(const PipelineConfig &cfg, const TrajectoryReader &reader)
{
  if (reader.dim() != 2 * cfg.wave.n)
  {
    throw ConfigError("trajectory has state length " + std::to_string(reader.dim()) +
                      " but the config asks for n = " + std::to_string(cfg.wave.n));
  }
  if (std::abs(reader.dt() - cfg.integrator.dt) > 1e-14 * std::abs(cfg.integrator.dt))
  {
    throw ConfigError("trajectory was written with dt = " + std::to_string(reader.dt()) +
                      ", config has dt = " + std::to_string(cfg.integrator.dt));
  }
  if (reader.count() != cfg.integrator.Steps() + 1)
  {
    throw ConfigError("trajectory holds " + std::to_string(reader.count()) +
                      " states, config needs " + std::to_string(cfg.integrator.Steps() + 1));
  }
}

PodBasis PodOrExplain(const SnapshotSet &set, Index r, const std::string &what)
{
  try
  {
    return ComputePod(set, r);
  }
  catch (const RankDeficient &e)
  {
    throw RankDeficient(what + " basis at r = " + std::to_string(r) + ": " + e.what());
  }
}

json SpectrumJson(const PodBasis &basis)
{
  json j;
  j["r"] = basis.r();
  j["captured_energy"] = basis.CapturedEnergy();
  j["singular_values"] = ToStd(basis.singular_values);
  return j;
}

}  // namespace

void PipelineConfig::Validate() const
{
  wave.Validate();
  integrator.Validate();
  (void)integrator.Steps();
  if (stride == 0)
  {
    throw ConfigError("stride must be at least 1");
  }
  if (ranks.empty())
  {
    throw ConfigError("need at least one rank");
  }
  for (Index r : ranks)
  {
    if (r < 1)
    {
      throw ConfigError("ranks must be positive, got " + std::to_string(r));
    }
  }
  if (deim_mult < 1)
  {
    throw ConfigError("deim multiplier must be positive");
  }
  if (variants.empty())
  {
    throw ConfigError("need at least one variant");
  }
  for (const auto &v : variants)
  {
    (void)RomVariant::Parse(v);
  }
  if (jobs < 1)
  {
    throw ConfigError("jobs must be at least 1");
  }
}

std::string FomSummaryJson(const FomResult &fom)
{
  json j;
  j["n"] = fom.n;
  j["dx"] = fom.dx;
  j["dt"] = fom.dt;
  j["steps"] = fom.steps;
  j["h_dx"] = fom.h_dx;
  j["h_drift_max"] = fom.h_drift_max;
  j["online_seconds"] = fom.online_seconds;
  j["picard_avg_iters"] = fom.picard_avg_iters;
  return j.dump(2);
}

FomResult CmdFom(const PipelineConfig &cfg)
{
  cfg.Validate();
  const fs::path dir = cfg.out / "fom";
  EnsureDir(dir);

  const WaveFom fom = AssembleWaveFom(cfg.wave);
  const double dx = cfg.wave.dx();
  const std::size_t steps = cfg.integrator.Steps();

  FomResult result;
  result.trajectory = dir / "trajectory.hrtraj";
  result.n = cfg.wave.n;
  result.dx = dx;
  result.dt = cfg.integrator.dt;
  result.steps = steps;
  result.h_dx = fom.FastHamiltonian(fom.z0) * dx;

  TrajectoryWriter writer(result.trajectory, 2 * fom.n(), steps + 1, cfg.integrator.dt);
  std::vector<double> times, h_series;
  times.reserve(steps + 1);
  h_series.reserve(steps + 1);
  double io_seconds = 0.0;
  auto observe = [&](std::size_t, double t, const Vector &z) {
    const double h = fom.FastHamiltonian(z) * dx;
    times.push_back(t);
    h_series.push_back(h);
    result.h_drift_max = std::max(result.h_drift_max, std::abs(h - result.h_dx));
    io_seconds += TimeOnline([&] { writer.Append(z); });
  };

  IntegrationStats stats;
  const double total = TimeOnline([&] {
    Integrate([&fom](const Vector &z) { return fom.FastRhs(z); }, fom.z0, cfg.integrator,
              observe, &stats, false);
  });
  writer.Close();
  result.online_seconds = total - io_seconds;
  result.picard_avg_iters = stats.AverageIterations();

  WriteSeriesCsv(dir / "h_series.csv", times, h_series);
  WriteText(dir / "summary.json", FomSummaryJson(result) + "\n");

  char line[160];
  std::snprintf(line, sizeof line, "fom: n=%ld steps=%zu H dx=%.10e drift=%.3e (%.2f s)",
                static_cast<long>(result.n), steps, result.h_dx, result.h_drift_max,
                result.online_seconds);
  Log(cfg, line);
  return result;
}

std::vector<RomArtifact> CmdOffline(const PipelineConfig &cfg, const fs::path &trajectory)
{
  cfg.Validate();
  {
    TrajectoryReader probe(trajectory);
    CheckTrajectory(cfg, probe);
  }
  const fs::path dir = cfg.out / "offline";
  EnsureDir(dir);

  const WaveFom fom = AssembleWaveFom(cfg.wave);
  const Index n = fom.n();
  const Trajectory traj = LoadTrajectory(trajectory);
  const Nonlinearity &nl = fom.system.h().nonlinearity();

  auto take_u = [n](const Vector &z) -> Vector { return z.head(n); };
  auto take_v = [n](const Vector &z) -> Vector { return z.tail(n); };
  auto take_g = [n, &nl](const Vector &z) -> Vector {
    Vector g(n);
    for (Index i = 0; i < n; i++)
    {
      g(i) = nl.G(z(i));
    }
    return g;
  };

  const SnapshotSet snap_u = Collect(traj, cfg.stride, take_u, SnapshotKind::StateU);
  const SnapshotSet snap_v = Collect(traj, cfg.stride, take_v, SnapshotKind::StateV);
  const SnapshotSet snap_g = Collect(traj, cfg.stride, take_g, SnapshotKind::NonlinearG);
  Persist(snap_u, dir / "snapshots_u.hrsnap");
  Persist(snap_v, dir / "snapshots_v.hrsnap");
  Persist(snap_g, dir / "snapshots_g.hrsnap");

  const Vector &z0 = traj.states.front();
  const Vector u0 = z0.head(n);
  const Vector v0 = z0.tail(n);
  const Vector g0 = take_g(z0);

  std::vector<RomVariant> variants;
  for (const auto &name : cfg.variants)
  {
    variants.push_back(RomVariant::Parse(name));
  }
  auto wanted = [&](auto pred) { return std::any_of(variants.begin(), variants.end(), pred); };
  const bool need_plain = wanted([](const RomVariant &v) { return !v.shifted(); });
  const bool need_shifted = wanted([](const RomVariant &v) { return v.shifted(); });
  const bool need_deim = wanted([](const RomVariant &v) { return v.kind() == RomKind::SpDeim; });

  std::optional<SnapshotSet> shifted_u, shifted_v, shifted_g;
  if (need_shifted)
  {
    shifted_u = Shift(snap_u, u0);
    shifted_v = Shift(snap_v, v0);
    shifted_g = Shift(snap_g, g0);
  }

  json summary;
  summary["config"] = ConfigJson(cfg);
  summary["snapshots"] = {{"count", snap_u.count()}, {"stride", cfg.stride}};
  json per_rank = json::array();

  std::vector<RomArtifact> artifacts;
  for (Index r : cfg.ranks)
  {
    const std::string tag = "r" + std::to_string(r);
    const fs::path rdir = dir / tag;
    EnsureDir(rdir);
    const Index s = cfg.deim_mult * r;
    json rj;
    rj["r"] = r;

    // Bases per shift flag: u, v and (when a DEIM variant wants it) the DEIM model.
    struct Bases
    {
      std::optional<PodBasis> u, v;
      std::optional<DeimModel> deim;
    };
    std::map<bool, Bases> bases;
    for (bool shifted : {false, true})
    {
      if ((shifted && !need_shifted) || (!shifted && !need_plain))
      {
        continue;
      }
      const std::string suffix = shifted ? "_shifted" : "";
      Bases &b = bases[shifted];
      b.u = PodOrExplain(shifted ? *shifted_u : snap_u, r, "u" + suffix);
      b.v = PodOrExplain(shifted ? *shifted_v : snap_v, r, "v" + suffix);
      PersistBasis(*b.u, rdir / ("basis_u" + suffix + ".hrsnap"));
      PersistBasis(*b.v, rdir / ("basis_v" + suffix + ".hrsnap"));
      json bj;
      bj["u"] = SpectrumJson(*b.u);
      bj["v"] = SpectrumJson(*b.v);
      const bool deim_here = std::any_of(variants.begin(), variants.end(), [&](const auto &v) {
        return v.kind() == RomKind::SpDeim && v.shifted() == shifted;
      });
      if (need_deim && deim_here)
      {
        const PodBasis psi = PodOrExplain(shifted ? *shifted_g : snap_g, s, "G" + suffix);
        PersistBasis(psi, rdir / ("basis_g" + suffix + ".hrsnap"));
        b.deim.emplace(BuildDeim(psi));
        json dj = SpectrumJson(psi);
        dj["s"] = s;
        dj["indices"] = b.deim->indices();
        dj["condition"] = b.deim->condition();
        bj["deim"] = dj;
        char line[160];
        std::snprintf(line, sizeof line, "offline: r=%ld%s DEIM s=%ld cond(P^T psi)=%.3e",
                      static_cast<long>(r), suffix.c_str(), static_cast<long>(s),
                      b.deim->condition());
        Log(cfg, line);
      }
      rj[shifted ? "shifted" : "unshifted"] = bj;
    }

    for (const auto &variant : variants)
    {
      Bases &b = bases.at(variant.shifted());
      const DeimModel *deim = variant.kind() == RomKind::SpDeim ? &*b.deim : nullptr;
      const ReducedModel model = BuildRom(variant, *b.u, *b.v, fom.system, deim);
      RomArtifact artifact{variant.Name(), r, rdir / (variant.Name() + ".hrrom")};
      PersistRom(model, artifact.path);
      artifacts.push_back(artifact);
    }
    per_rank.push_back(rj);
    Log(cfg, "offline: r=" + std::to_string(r) + " artifacts written to " + rdir.string());
  }
  summary["ranks"] = per_rank;
  WriteText(dir / "summary.json", summary.dump(2) + "\n");
  return artifacts;
}

RunReport CmdOnline(const PipelineConfig &cfg, const fs::path &artifact,
                    const fs::path &trajectory)
{
  cfg.Validate();
  const ReducedModel model = LoadRom(artifact);
  if (model.ops().n_u != cfg.wave.n)
  {
    throw ConfigError("artifact " + artifact.string() + " was built for n = " +
                      std::to_string(model.ops().n_u) + ", config has n = " +
                      std::to_string(cfg.wave.n));
  }

  Vector z0;
  {
    TrajectoryReader head(trajectory);
    CheckTrajectory(cfg, head);
    if (!head.Next(z0))
    {
      throw FormatError("trajectory " + trajectory.string() + " holds no states");
    }
  }

  IntegrationStats stats;
  Trajectory coeffs;
  const Vector x0 = model.InitialCoefficients(z0);
  const double seconds = TimeOnline([&] {
    coeffs = Integrate([&model](const Vector &x) { return model.Rhs(x); }, x0, cfg.integrator,
                       {}, &stats);
  });

  // One streaming pass over the full-order states gives E_inf and H(z_k).
  const WaveFom fom = AssembleWaveFom(cfg.wave);
  const double dx = cfg.wave.dx();
  std::vector<double> h_fom(coeffs.size());
  TrajectoryReader reader(trajectory);
  const double e_inf = EInf(reader, coeffs, model, [&](std::size_t k, const Vector &z) {
    h_fom[k] = fom.FastHamiltonian(z) * dx;
  });

  RunReport report;
  report.variant = model.variant().Name();
  report.r = model.ops().r_u;
  report.s = model.ops().deim_s;
  report.e_inf = e_inf;
  report.h_series = ComputeHamiltonianSeries(model, coeffs, dx, h_fom);
  report.h_offset_max = report.h_series.offset_max;
  report.h_drift_max = report.h_series.drift_max;
  report.online_seconds = seconds;
  report.steps = stats.steps;
  report.picard_avg_iters = stats.AverageIterations();

  const fs::path dir = cfg.out / "online" / ("r" + std::to_string(report.r));
  EnsureDir(dir);
  WriteText(dir / (report.variant + ".json"), ToJson(report) + "\n");
  WriteSeriesCsv(dir / (report.variant + "_h.csv"), report.h_series.times,
                 report.h_series.values);
  WriteSeriesCsv(dir / (report.variant + "_offset.csv"), report.h_series.times,
                 report.h_series.offsets);

  char line[200];
  std::snprintf(line, sizeof line,
                "online: r=%ld %-9s E_inf=%.4e offset=%.3e drift=%.3e t=%.3f s picard=%.1f",
                static_cast<long>(report.r), report.variant.c_str(), report.e_inf,
                report.h_offset_max, report.h_drift_max, report.online_seconds,
                report.picard_avg_iters);
  Log(cfg, line);
  return report;
}

std::string FormatTable(const std::vector<RunReport> &runs)
{
  std::vector<Index> ranks;
  std::vector<std::string> names;
  for (const auto &run : runs)
  {
    if (std::find(ranks.begin(), ranks.end(), run.r) == ranks.end())
    {
      ranks.push_back(run.r);
    }
    if (std::find(names.begin(), names.end(), run.variant) == names.end())
    {
      names.push_back(run.variant);
    }
  }

  std::ostringstream out;
  char cell[64];
  for (Index r : ranks)
  {
    out << "r = " << r << '\n';
    std::snprintf(cell, sizeof cell, "%-22s", "");
    out << cell;
    for (const auto &name : names)
    {
      std::snprintf(cell, sizeof cell, "%12s", name.c_str());
      out << cell;
    }
    out << '\n';
    const char *labels[] = {"E_inf", "max|H_r dx - H dx|", "t_cpu (s)"};
    for (int row = 0; row < 3; row++)
    {
      std::snprintf(cell, sizeof cell, "%-22s", labels[row]);
      out << cell;
      for (const auto &name : names)
      {
        auto it = std::find_if(runs.begin(), runs.end(), [&](const RunReport &run) {
          return run.r == r && run.variant == name;
        });
        if (it == runs.end())
        {
          std::snprintf(cell, sizeof cell, "%12s", "-");
        }
        else if (row == 0)
        {
          std::snprintf(cell, sizeof cell, "%12.3e", it->e_inf);
        }
        else if (row == 1)
        {
          std::snprintf(cell, sizeof cell, "%12.3e", it->h_offset_max);
        }
        else
        {
          std::snprintf(cell, sizeof cell, "%12.3f", it->online_seconds);
        }
        out << cell;
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

ReproduceResult CmdReproduce(const PipelineConfig &cfg)
{
  cfg.Validate();
  ReproduceResult result;
  result.fom = CmdFom(cfg);
  const auto artifacts = CmdOffline(cfg, result.fom.trajectory);

  result.runs.resize(artifacts.size());
  if (cfg.jobs == 1)
  {
    for (std::size_t i = 0; i < artifacts.size(); i++)
    {
      result.runs[i] = CmdOnline(cfg, artifacts[i].path, result.fom.trajectory);
    }
  }
  else
  {
    // Each worker owns its runs and output files; the first failure is rethrown.
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    const std::size_t count = artifacts.size();
    const std::size_t jobs = std::min<std::size_t>(cfg.jobs, count);
    for (std::size_t w = 0; w < jobs; w++)
    {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += jobs)
        {
          try
          {
            result.runs[i] = CmdOnline(cfg, artifacts[i].path, result.fom.trajectory);
          }
          catch (...)
          {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
            {
              failure = std::current_exception();
            }
            return;
          }
        }
      });
    }
    for (auto &worker : workers)
    {
      worker.join();
    }
    if (failure)
    {
      std::rethrow_exception(failure);
    }
  }

  result.table = FormatTable(result.runs);
  json j;
  j["config"] = ConfigJson(cfg);
  j["fom"] = json::parse(FomSummaryJson(result.fom));
  json runs = json::array();
  for (const auto &run : result.runs)
  {
    runs.push_back(ReportJson(run));
  }
  j["runs"] = runs;
  result.json = j.dump(2);

  WriteText(cfg.out / "reproduce.json", result.json + "\n");
  WriteText(cfg.out / "table.txt", result.table);
  return result;
}

}  // namespace hamrom::pipeline
