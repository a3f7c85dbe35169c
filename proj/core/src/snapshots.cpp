// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/snapshots.hpp"

#include <memory>
#include "hamrom/binary_io.hpp"
#include "hamrom/errors.hpp"

namespace hamrom
{

namespace
{

constexpr std::string_view SNAPSHOT_MAGIC = "HRSNAP01";
constexpr std::string_view TRAJECTORY_MAGIC = "HRTRAJ01";
constexpr std::uint32_t FORMAT_VERSION = 1;

}  // namespace

const char *ToString(SnapshotKind kind)
{
  switch (kind)
  {
    case SnapshotKind::StateU:
      return "state-u";
    case SnapshotKind::StateV:
      return "state-v";
    case SnapshotKind::NonlinearG:
      return "nonlinear-G";
    case SnapshotKind::Basis:
      return "basis";
  }
  return "unknown";
}

void SnapshotSet::Validate() const
{
  if (columns.cols() < 1)
  {
    throw ConfigError("snapshot set must hold at least one column");
  }
  detail::CheckDim(static_cast<std::ptrdiff_t>(sample_steps.size()), columns.cols(),
                   "snapshot sample step list");
  if (shift_ref)
  {
    detail::CheckDim(shift_ref->size(), columns.rows(), "snapshot shift reference");
  }
}

SnapshotSet Collect(const Trajectory &traj, std::size_t stride, const StateExtractor &extract,
                    SnapshotKind kind)
{
  if (traj.states.empty())
  {
    throw ConfigError("cannot collect snapshots from an empty trajectory");
  }
  if (stride == 0)
  {
    throw ConfigError("snapshot stride must be positive");
  }
  const std::size_t last = traj.states.size() - 1;
  std::vector<std::uint64_t> steps;
  for (std::size_t k = 0; k <= last; k += stride)
  {
    steps.push_back(k);
  }
  if (steps.back() != last)
  {
    steps.push_back(last);
  }

  SnapshotSet set;
  set.kind = kind;
  set.sample_steps = steps;
  for (std::size_t j = 0; j < steps.size(); j++)
  {
    Vector sample = extract(traj.states[steps[j]]);
    if (j == 0)
    {
      set.columns.resize(sample.size(), static_cast<Index>(steps.size()));
    }
    detail::CheckDim(sample.size(), set.columns.rows(), "snapshot extractor output");
    set.columns.col(static_cast<Index>(j)) = sample;
  }
  return set;
}

SnapshotSet Shift(const SnapshotSet &set, const Vector &ref)
{
  if (set.shift_ref)
  {
    throw ConfigError("snapshot set is already shifted");
  }
  detail::CheckDim(ref.size(), set.n(), "snapshot shift reference");
  SnapshotSet out = set;
  out.columns.colwise() -= ref;
  out.shift_ref = ref;
  return out;
}

namespace detail
{

void WriteSnapshotBody(io::BinaryWriter &w, const SnapshotSet &set)
{
  set.Validate();
  w.Scalar<std::uint32_t>(FORMAT_VERSION);
  w.Scalar<std::uint32_t>(static_cast<std::uint32_t>(set.kind));
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(set.n()));
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(set.count()));
  w.Scalar<std::uint8_t>(set.shift_ref ? 1 : 0);
  if (set.shift_ref)
  {
    w.Vec(*set.shift_ref);
  }
  for (auto step : set.sample_steps)
  {
    w.Scalar<std::uint64_t>(step);
  }
  w.Mat(set.columns);
}

SnapshotSet ReadSnapshotBody(io::BinaryReader &r)
{
  const auto &path = r.path();
  const auto version = r.Scalar<std::uint32_t>("version");
  if (version != FORMAT_VERSION)
  {
    throw FormatError(path.string() + ": unsupported snapshot version " +
                      std::to_string(version));
  }
  const auto kind = r.Scalar<std::uint32_t>("kind");
  if (kind > static_cast<std::uint32_t>(SnapshotKind::Basis))
  {
    throw FormatError(path.string() + ": unknown snapshot kind " + std::to_string(kind));
  }
  const auto n = r.Scalar<std::uint64_t>("n");
  const auto m = r.Scalar<std::uint64_t>("M");
  const auto has_shift = r.Scalar<std::uint8_t>("has_shift");
  if (has_shift > 1)
  {
    throw FormatError(path.string() + ": invalid shift flag");
  }

  SnapshotSet set;
  set.kind = static_cast<SnapshotKind>(kind);
  if (has_shift)
  {
    set.shift_ref = r.Vec(n, "shift_ref");
  }
  r.CheckRemaining(m, sizeof(std::uint64_t), "sample_steps");
  set.sample_steps.resize(m);
  for (auto &step : set.sample_steps)
  {
    step = r.Scalar<std::uint64_t>("sample_steps");
  }
  set.columns = r.Mat(n, m, "columns");
  try
  {
    set.Validate();
  }
  catch (const Error &e)
  {
    throw FormatError(path.string() + ": " + e.what());
  }
  return set;
}

}  // namespace detail

void Persist(const SnapshotSet &set, const std::filesystem::path &path)
{
  set.Validate();
  io::BinaryWriter w(path);
  w.Magic(SNAPSHOT_MAGIC);
  detail::WriteSnapshotBody(w, set);
  w.Close();
}

SnapshotSet LoadSnapshots(const std::filesystem::path &path)
{
  io::BinaryReader r(path);
  r.ExpectMagic(SNAPSHOT_MAGIC);
  SnapshotSet set = detail::ReadSnapshotBody(r);
  if (!r.AtEnd())
  {
    throw FormatError(path.string() + ": trailing bytes after snapshot payload");
  }
  return set;
}

struct TrajectoryWriter::Impl
{
  io::BinaryWriter writer;
  Index dim;
  std::uint64_t expected;
  std::uint64_t written = 0;
  bool closed = false;
};

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path &path, Index dim,
                                   std::uint64_t count, double dt)
  : impl_(std::make_unique<Impl>(Impl{io::BinaryWriter(path), dim, count}))
{
  auto &w = impl_->writer;
  w.Magic(TRAJECTORY_MAGIC);
  w.Scalar<std::uint32_t>(FORMAT_VERSION);
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(dim));
  w.Scalar<std::uint64_t>(count);
  w.Scalar<double>(dt);
}

TrajectoryWriter::~TrajectoryWriter() = default;

void TrajectoryWriter::Append(const Vector &state)
{
  detail::CheckDim(state.size(), impl_->dim, "trajectory state");
  if (impl_->written == impl_->expected)
  {
    throw FormatError("trajectory writer: more states than announced");
  }
  impl_->writer.Vec(state);
  impl_->written++;
}

void TrajectoryWriter::Close()
{
  if (impl_->closed)
  {
    return;
  }
  impl_->closed = true;
  impl_->writer.Close();
  if (impl_->written != impl_->expected)
  {
    throw FormatError("trajectory writer: wrote " + std::to_string(impl_->written) +
                      " states, announced " + std::to_string(impl_->expected));
  }
}

struct TrajectoryReader::Impl
{
  io::BinaryReader reader;
  Index dim = 0;
  std::uint64_t count = 0;
  double dt = 0.0;
  std::uint64_t consumed = 0;
};

TrajectoryReader::TrajectoryReader(const std::filesystem::path &path)
  : impl_(std::make_unique<Impl>(Impl{io::BinaryReader(path)}))
{
  auto &r = impl_->reader;
  r.ExpectMagic(TRAJECTORY_MAGIC);
  const auto version = r.Scalar<std::uint32_t>("version");
  if (version != FORMAT_VERSION)
  {
    throw FormatError(path.string() + ": unsupported trajectory version " +
                      std::to_string(version));
  }
  const auto dim = r.Scalar<std::uint64_t>("dim");
  impl_->count = r.Scalar<std::uint64_t>("count");
  impl_->dt = r.Scalar<double>("dt");
  if (dim > static_cast<std::uint64_t>(std::numeric_limits<Index>::max()))
  {
    throw FormatError(path.string() + ": dimension overflow in dim");
  }
  impl_->dim = static_cast<Index>(dim);
  if (dim != 0 && impl_->count > std::numeric_limits<std::uint64_t>::max() / dim)
  {
    throw FormatError(path.string() + ": dimension overflow in states");
  }
  r.CheckRemaining(impl_->count * dim, sizeof(double), "states");
}

TrajectoryReader::~TrajectoryReader() = default;

Index TrajectoryReader::dim() const { return impl_->dim; }
std::uint64_t TrajectoryReader::count() const { return impl_->count; }
double TrajectoryReader::dt() const { return impl_->dt; }

bool TrajectoryReader::Next(Vector &out)
{
  if (impl_->consumed == impl_->count)
  {
    return false;
  }
  out.resize(impl_->dim);
  impl_->reader.Doubles(out.data(), static_cast<std::uint64_t>(impl_->dim), "states");
  impl_->consumed++;
  return true;
}

void PersistTrajectory(const Trajectory &traj, double dt, const std::filesystem::path &path)
{
  TrajectoryWriter w(path, traj.dim, traj.states.size(), dt);
  for (const auto &state : traj.states)
  {
    w.Append(state);
  }
  w.Close();
}

Trajectory LoadTrajectory(const std::filesystem::path &path)
{
  TrajectoryReader r(path);
  Trajectory traj;
  traj.dim = r.dim();
  traj.states.reserve(r.count());
  traj.times.reserve(r.count());
  Vector state;
  std::uint64_t k = 0;
  while (r.Next(state))
  {
    traj.states.push_back(state);
    traj.times.push_back(static_cast<double>(k++) * r.dt());
  }
  return traj;
}

}  // namespace hamrom
