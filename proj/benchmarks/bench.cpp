// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>
#include "hamrom/deim.hpp"
#include "hamrom/pod.hpp"
#include "hamrom/rom.hpp"
#include "hamrom/wave.hpp"

using namespace hamrom;

namespace
{

WaveFom Wave(Index n)
{
  WaveConfig cfg;
  cfg.n = n;
  return AssembleWaveFom(cfg);
}

// Orthonormal basis from a short full-order run, enough to time the reduced right-hand sides.
struct Bases
{
  PodBasis u, v, g;
};

Bases MakeBases(const WaveFom &fom, Index r, Index s)
{
  IntegratorConfig ic;
  ic.t_final = 5.0;
  const Trajectory traj = Integrate([&](const Vector &z) { return fom.FastRhs(z); }, fom.z0, ic);
  const Index n = fom.n();
  const SnapshotSet su = Collect(traj, 5, [&](const Vector &z) -> Vector { return z.head(n); }, SnapshotKind::StateU);
  const SnapshotSet sv = Collect(traj, 5, [&](const Vector &z) -> Vector { return z.tail(n); }, SnapshotKind::StateV);
  const SnapshotSet sg = Collect(
      traj, 5, [&](const Vector &z) -> Vector { return (1.0 - z.head(n).array().cos()).matrix(); },
      SnapshotKind::NonlinearG);
  return {ComputePod(su, r), ComputePod(sv, r), ComputePod(sg, s)};
}

void BM_FomFastRhs(benchmark::State &state)
{
  const WaveFom fom = Wave(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(fom.FastRhs(fom.z0));
  }
}
BENCHMARK(BM_FomFastRhs)->Arg(500)->Arg(2000);

void BM_FomDenseRhs(benchmark::State &state)
{
  const WaveFom fom = Wave(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(Rhs(fom.system, fom.z0));
  }
}
BENCHMARK(BM_FomDenseRhs)->Arg(500);

void BM_ReducedRhs(benchmark::State &state, RomKind kind)
{
  const Index r = state.range(0);
  const WaveFom fom = Wave(500);
  const Bases b = MakeBases(fom, r, 2 * r);
  const DeimModel deim = BuildDeim(b.g);
  const ReducedModel model =
      BuildRom(RomVariant(kind, false), b.u, b.v, fom.system, kind == RomKind::SpDeim ? &deim : nullptr);
  const Vector x = model.InitialCoefficients(fom.z0);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(model.Rhs(x));
  }
}
BENCHMARK_CAPTURE(BM_ReducedRhs, sp_pod, RomKind::SpPod)->Arg(10)->Arg(20);
BENCHMARK_CAPTURE(BM_ReducedRhs, sp_deim, RomKind::SpDeim)->Arg(10)->Arg(20);
BENCHMARK_CAPTURE(BM_ReducedRhs, g_rom, RomKind::GRom)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
