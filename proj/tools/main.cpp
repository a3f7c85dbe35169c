// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

// hamrom: full-order wave run, offline reduction, online ROM runs and the full benchmark.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.

#include <CLI11.hpp>
#include <iostream>
#include "hamrom/errors.hpp"
#include "pipeline.hpp"

namespace
{

enum ExitCode
{
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kNumerical = 3,
  kIo = 4,
};

}  // namespace

int main(int argc, char **argv)
{
  using hamrom::pipeline::PipelineConfig;
  PipelineConfig cfg;

  CLI::App app{"Structure-preserving reduced models of a nonlinear wave equation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  app.add_option("--n", cfg.wave.n, "grid points")->capture_default_str();
  app.add_option("--c", cfg.wave.c_speed, "wave speed")->capture_default_str();
  app.add_option("--dt", cfg.integrator.dt, "time step")->capture_default_str();
  app.add_option("--t-final", cfg.integrator.t_final, "final time")->capture_default_str();
  app.add_option("--stride", cfg.stride, "steps between snapshots")->capture_default_str();
  app.add_option("--r", cfg.ranks, "POD ranks")->delimiter(',')->capture_default_str();
  app.add_option("--deim-mult", cfg.deim_mult, "DEIM points per POD mode")
      ->capture_default_str();
  app.add_option("--variants", cfg.variants, "g-rom, sp-pod-1, sp-pod-2, sp-deim-1, sp-deim-2")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--picard-tol", cfg.integrator.picard_tol, "Picard relative tolerance")
      ->capture_default_str();
  app.add_option("--picard-max-iter", cfg.integrator.picard_max_iter, "Picard iteration cap")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "parallel online runs in reproduce")
      ->capture_default_str();
  app.add_flag("--quiet", cfg.quiet, "no progress lines on stderr");

  std::filesystem::path trajectory;
  std::filesystem::path artifact;

  auto *fom = app.add_subcommand("fom", "integrate the full-order model");
  auto *offline = app.add_subcommand("offline", "snapshots, bases, DEIM and ROM artifacts");
  offline->add_option("--trajectory", trajectory, "full-order trajectory (default <out>/fom)");
  auto *online = app.add_subcommand("online", "run one ROM artifact and report metrics");
  online->add_option("--artifact", artifact, "ROM artifact")->required();
  online->add_option("--trajectory", trajectory, "full-order trajectory (default <out>/fom)");
  auto *reproduce = app.add_subcommand("reproduce", "full pipeline and result table");
  for (auto *sub : {fom, offline, online, reproduce})
  {
    sub->fallthrough();
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  namespace pl = hamrom::pipeline;
  const auto default_trajectory = [&] {
    return trajectory.empty() ? cfg.out / "fom" / "trajectory.hrtraj" : trajectory;
  };
  try
  {
    if (fom->parsed())
    {
      std::cout << pl::FomSummaryJson(pl::CmdFom(cfg)) << '\n';
    }
    else if (offline->parsed())
    {
      for (const auto &a : pl::CmdOffline(cfg, default_trajectory()))
      {
        std::cout << a.path.string() << '\n';
      }
    }
    else if (online->parsed())
    {
      std::cout << hamrom::ToJson(pl::CmdOnline(cfg, artifact, default_trajectory())) << '\n';
    }
    else if (reproduce->parsed())
    {
      std::cout << pl::CmdReproduce(cfg).table;
    }
  }
  catch (const hamrom::PicardDivergence &e)
  {
    std::cerr << "error: " << e.what() << " (step " << e.step() << ")\n";
    return kNumerical;
  }
  catch (const hamrom::NumericalError &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  catch (const hamrom::IoError &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  catch (const hamrom::ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  catch (const hamrom::DimensionError &e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  catch (const std::exception &e)
  {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
