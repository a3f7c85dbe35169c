// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include "hamrom/errors.hpp"
#include "hamrom/pod.hpp"
#include "hamrom/rom.hpp"
#include "oracles.hpp"
#include "pipeline.hpp"

using namespace hamrom;
using namespace hamrom::pipeline;
namespace fs = std::filesystem;

namespace
{

PipelineConfig Small(const fs::path &out)
{
  PipelineConfig cfg;
  cfg.wave.n = 32;
  cfg.integrator.t_final = 5.0;
  cfg.stride = 10;
  cfg.ranks = {4, 6};
  cfg.out = out;
  cfg.quiet = true;
  return cfg;
}

std::string Slurp(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json WithoutTiming(nlohmann::json j)
{
  if (j.is_object())
  {
    j.erase("online_seconds");
    for (auto &item : j.items())
    {
      item.value() = WithoutTiming(item.value());
    }
  }
  else if (j.is_array())
  {
    for (auto &item : j)
    {
      item = WithoutTiming(item);
    }
  }
  return j;
}

int RunCli(const std::string &args)
{
  const std::string cmd = std::string(HAMROM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void CheckReportSchema(const nlohmann::json &j)
{
  REQUIRE(j.is_object());
  CHECK(j.size() == 9);
  CHECK(j.at("variant").is_string());
  CHECK(j.at("r").is_number_integer());
  CHECK(j.at("s").is_number_integer());
  CHECK(j.at("steps").is_number_integer());
  for (const char *key : {"e_inf", "h_offset_max", "h_drift_max", "online_seconds", "picard_avg_iters"})
  {
    CHECK(j.at(key).is_number());
    CHECK(j.at(key).get<double>() >= 0.0);
  }
}

}  // namespace

TEST_CASE("defaults describe the benchmark")
{
  const PipelineConfig cfg;
  CHECK(cfg.wave.n == 500);
  CHECK(cfg.wave.c_speed == 0.1);
  CHECK(cfg.integrator.dt == 0.01);
  CHECK(cfg.integrator.t_final == 50.0);
  CHECK(cfg.stride == 50);
  CHECK(cfg.ranks == std::vector<Index>{10, 20});
  CHECK(cfg.deim_mult == 2);
  CHECK(cfg.variants.size() == 5);
  CHECK_NOTHROW(cfg.Validate());

  PipelineConfig bad = cfg;
  bad.variants = {"sp-pod-9"};
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = cfg;
  bad.stride = 0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
}

TEST_CASE("fom with t_final = 0 writes a single state")
{
  PipelineConfig cfg = Small(oracle::TempDir("cli_zero"));
  cfg.integrator.t_final = 0.0;
  const FomResult fom = CmdFom(cfg);
  CHECK(fom.steps == 0);
  const Trajectory traj = LoadTrajectory(fom.trajectory);
  CHECK(traj.size() == 1);
  CHECK(fom.h_drift_max == 0.0);
}

TEST_CASE("n = 32 full-order smoke run")
{
  PipelineConfig cfg = Small(oracle::TempDir("cli_n32"));
  cfg.integrator.t_final = 50.0;
  const FomResult fom = CmdFom(cfg);
  CHECK(fom.steps == 5000);
  const auto summary = nlohmann::json::parse(Slurp(cfg.out / "fom" / "summary.json"));
  CHECK(summary.at("h_dx").get<double>() == fom.h_dx);
  MESSAGE("n = 32 drift " << fom.h_drift_max);
  CHECK(fom.h_drift_max <= 1e-9);
}

TEST_CASE("offline and online on a small grid")
{
  const PipelineConfig cfg = Small(oracle::TempDir("cli_small"));
  const FomResult fom = CmdFom(cfg);
  const auto artifacts = CmdOffline(cfg, fom.trajectory);
  REQUIRE(artifacts.size() == 10);
  CHECK(artifacts.front().r == 4);
  CHECK(artifacts.front().variant == "g-rom");
  CHECK(artifacts.back().r == 6);

  const PodBasis u4 = LoadBasis(cfg.out / "offline" / "r4" / "basis_u.hrsnap");
  CHECK(u4.r() == 4);
  CHECK((u4.phi.transpose() * u4.phi - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);

  const Trajectory traj = LoadTrajectory(fom.trajectory);
  const Vector u0 = traj.states.front().head(32);
  const PodBasis u4s = LoadBasis(cfg.out / "offline" / "r4" / "basis_u_shifted.hrsnap");
  REQUIRE(u4s.shifted());
  CHECK(*u4s.shift_ref == u0);
  const ReducedModel pod2 = LoadRom(cfg.out / "offline" / "r4" / "sp-pod-2.hrrom");
  CHECK(pod2.ops().z_ref.head(32) == u0);

  for (const auto &a : artifacts)
  {
    const std::string before = Slurp(a.path);
    PersistRom(LoadRom(a.path), cfg.out / "again.hrrom");
    CHECK(Slurp(cfg.out / "again.hrrom") == before);
  }
  CHECK(LoadSnapshots(cfg.out / "offline" / "snapshots_g.hrsnap").count() == 51);
  CHECK_NOTHROW(nlohmann::json::parse(Slurp(cfg.out / "offline" / "summary.json")));

  const RunReport first = CmdOnline(cfg, artifacts[4].path, fom.trajectory);
  const std::string json_first = Slurp(cfg.out / "online" / "r4" / "sp-deim-2.json");
  CHECK(first.variant == "sp-deim-2");
  CHECK(first.r == 4);
  CHECK(first.s == 8);
  CHECK(first.steps == 500);
  CHECK(first.e_inf > 0.0);
  CHECK(first.picard_avg_iters > 0.0);
  CheckReportSchema(nlohmann::json::parse(json_first));

  const RunReport second = CmdOnline(cfg, artifacts[4].path, fom.trajectory);
  const std::string json_second = Slurp(cfg.out / "online" / "r4" / "sp-deim-2.json");
  CHECK(WithoutTiming(nlohmann::json::parse(json_first)) ==
        WithoutTiming(nlohmann::json::parse(json_second)));
  CHECK(Slurp(cfg.out / "online" / "r4" / "sp-deim-2_h.csv").rfind("t,value\n", 0) == 0);
  CHECK(Slurp(cfg.out / "online" / "r4" / "sp-deim-2_offset.csv").rfind("t,value\n", 0) == 0);

  PipelineConfig other = cfg;
  other.wave.n = 40;
  CHECK_THROWS_AS(CmdOnline(other, artifacts[0].path, fom.trajectory), ConfigError);
  other = cfg;
  other.integrator.dt = 0.005;
  CHECK_THROWS_AS(CmdOnline(other, artifacts[0].path, fom.trajectory), ConfigError);
}

TEST_CASE("identity-basis artifact reproduces the full-order run")
{
  const PipelineConfig cfg = Small(oracle::TempDir("cli_identity"));
  const FomResult fom = CmdFom(cfg);
  const WaveFom wave = AssembleWaveFom(cfg.wave);
  PodBasis id;
  id.phi = Matrix::Identity(32, 32);
  id.singular_values = Vector::Ones(32);
  const ReducedModel model = BuildRom(RomVariant(RomKind::SpPod, false), id, id, wave.system);
  PersistRom(model, cfg.out / "identity.hrrom");
  const RunReport report = CmdOnline(cfg, cfg.out / "identity.hrrom", fom.trajectory);
  CHECK(report.e_inf <= 1e-8);
  CHECK(report.h_offset_max <= 1e-12);
}

TEST_CASE("reproduce: table layout, single variant and schema")
{
  PipelineConfig cfg = Small(oracle::TempDir("cli_reproduce"));
  cfg.jobs = 3;
  const ReproduceResult result = CmdReproduce(cfg);
  CHECK(result.runs.size() == 10);
  std::istringstream table(result.table);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(table, line))
  {
    if (!line.empty())
    {
      lines.push_back(line);
    }
  }
  REQUIRE(lines.size() == 2 * 5);
  CHECK(lines[0] == "r = 4");
  std::istringstream header(lines[1]);
  std::vector<std::string> columns{std::istream_iterator<std::string>(header), {}};
  CHECK(columns == cfg.variants);
  CHECK(lines[2].rfind("E_inf", 0) == 0);
  CHECK(lines[3].rfind("max|H_r dx - H dx|", 0) == 0);
  CHECK(lines[4].rfind("t_cpu (s)", 0) == 0);
  CHECK(Slurp(cfg.out / "table.txt") == result.table);

  const auto j = nlohmann::json::parse(Slurp(cfg.out / "reproduce.json"));
  CHECK(j.at("config").at("n") == 32);
  CHECK(j.at("fom").at("steps") == 500);
  REQUIRE(j.at("runs").size() == 10);
  for (const auto &run : j.at("runs"))
  {
    CheckReportSchema(run);
  }

  PipelineConfig serial = cfg;
  serial.jobs = 1;
  serial.out = oracle::TempDir("cli_reproduce_serial");
  const ReproduceResult again = CmdReproduce(serial);
  CHECK(WithoutTiming(nlohmann::json::parse(again.json)) == WithoutTiming(nlohmann::json::parse(result.json)));

  PipelineConfig one = Small(oracle::TempDir("cli_one"));
  one.variants = {"sp-deim-2"};
  const ReproduceResult single = CmdReproduce(one);
  CHECK(single.runs.size() == 2);
  CHECK(single.table.find("g-rom") == std::string::npos);
  CHECK(single.table.find("sp-deim-2") != std::string::npos);
  CHECK_FALSE(fs::exists(one.out / "offline" / "r4" / "basis_u.hrsnap"));
}

TEST_CASE("SP-DEIM-2 at r = 10 on the default benchmark")
{
  PipelineConfig cfg;
  cfg.out = oracle::TempDir("cli_default");
  cfg.quiet = true;
  cfg.ranks = {10};
  cfg.variants = {"sp-deim-2"};
  const FomResult fom = CmdFom(cfg);
  CHECK(fom.h_dx == doctest::Approx(1.258e-1).epsilon(5e-3));
  const auto artifacts = CmdOffline(cfg, fom.trajectory);
  REQUIRE(artifacts.size() == 1);
  const RunReport report = CmdOnline(cfg, artifacts[0].path, fom.trajectory);
  CHECK(report.s == 20);
  CHECK(report.steps == 5000);
  CHECK(report.h_offset_max <= 1e-9);
}

TEST_CASE("command-line exit codes")
{
  const fs::path dir = oracle::TempDir("cli_exit");
  const std::string out = " --quiet --out " + dir.string();
  CHECK(RunCli("--help") == 0);
  CHECK(RunCli("") == 2);
  CHECK(RunCli("fom --n 2" + out) == 2);
  CHECK(RunCli("fom --variants nope" + out) == 2);
  CHECK(RunCli("fom --dt 0.03 --t-final 1" + out) == 2);
  CHECK(RunCli("offline --trajectory " + (dir / "absent.hrtraj").string() + out) == 4);
  CHECK(RunCli("fom --n 32 --t-final 1 --picard-max-iter 1" + out) == 3);

  {
    std::ofstream config(dir / "run.cfg");
    config << "# small run\nn=32\nt-final=1\nstride=10\nr=3\nvariants=sp-pod-2\n";
  }
  CHECK(RunCli("reproduce --config " + (dir / "run.cfg").string() + " --dt 0.005" + out) == 0);
  const auto j = nlohmann::json::parse(Slurp(dir / "reproduce.json"));
  CHECK(j.at("config").at("n") == 32);
  CHECK(j.at("config").at("dt") == 0.005);
  CHECK(j.at("fom").at("steps") == 200);
  REQUIRE(j.at("runs").size() == 1);
  CHECK(j.at("runs")[0].at("variant") == "sp-pod-2");

  CHECK(RunCli("online --artifact " + (dir / "offline" / "r3" / "sp-pod-2.hrrom").string() +
               " --n 32 --t-final 1 --dt 0.005" + out) == 0);
  CHECK(RunCli("online --artifact " + (dir / "offline" / "r3" / "sp-pod-2.hrrom").string() +
               " --n 32 --t-final 1" + out) == 2);
}
