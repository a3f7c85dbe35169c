// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_SNAPSHOTS_HPP
#define HAMROM_SNAPSHOTS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>
#include "hamrom/hamiltonian.hpp"
#include "hamrom/integrator.hpp"

namespace hamrom
{

namespace io
{
class BinaryReader;
class BinaryWriter;
}  // namespace io

enum class SnapshotKind : std::uint32_t
{
  StateU = 0,
  StateV = 1,
  NonlinearG = 2,
  Basis = 3,
};

const char *ToString(SnapshotKind kind);

// n x M sample matrix. When shift_ref is set, column j holds sample_j - shift_ref.
struct SnapshotSet
{
  Matrix columns;
  std::vector<std::uint64_t> sample_steps;
  std::optional<Vector> shift_ref;
  SnapshotKind kind = SnapshotKind::StateU;

  Index n() const { return columns.rows(); }
  Index count() const { return columns.cols(); }

  // Throws DimensionError/ConfigError on inconsistent fields.
  void Validate() const;
};

using StateExtractor = std::function<Vector(const Vector &)>;

// Samples steps 0, stride, 2 stride, ... and always the final step, in increasing order.
SnapshotSet Collect(const Trajectory &traj, std::size_t stride, const StateExtractor &extract,
                    SnapshotKind kind);

// Every column minus ref; zero columns are kept. Throws ConfigError on an already shifted set.
SnapshotSet Shift(const SnapshotSet &set, const Vector &ref);

// Container "HRSNAP01": magic | u32 version | u32 kind | u64 n | u64 M | u8 has_shift |
// shift_ref (n f64, if flagged) | sample_steps (M u64) | columns (n M f64, column-major).
// All little-endian.
void Persist(const SnapshotSet &set, const std::filesystem::path &path);
SnapshotSet LoadSnapshots(const std::filesystem::path &path);

namespace detail
{

// Container body after the magic; shared with the basis container.
void WriteSnapshotBody(io::BinaryWriter &w, const SnapshotSet &set);
SnapshotSet ReadSnapshotBody(io::BinaryReader &r);

}  // namespace detail

// Full-resolution trajectory container "HRTRAJ01": magic | u32 version | u64 dim |
// u64 count | f64 dt | count states of dim f64 each. Written incrementally so a long run
// never holds more than one state for output.
class TrajectoryWriter
{
public:
  TrajectoryWriter(const std::filesystem::path &path, Index dim, std::uint64_t count, double dt);
  ~TrajectoryWriter();

  TrajectoryWriter(const TrajectoryWriter &) = delete;
  TrajectoryWriter &operator=(const TrajectoryWriter &) = delete;

  void Append(const Vector &state);

  // Throws FormatError if fewer states than announced were written.
  void Close();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class TrajectoryReader
{
public:
  explicit TrajectoryReader(const std::filesystem::path &path);
  ~TrajectoryReader();

  TrajectoryReader(const TrajectoryReader &) = delete;
  TrajectoryReader &operator=(const TrajectoryReader &) = delete;

  Index dim() const;
  std::uint64_t count() const;
  double dt() const;

  // Reads the next state into out; false once all states have been consumed.
  bool Next(Vector &out);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void PersistTrajectory(const Trajectory &traj, double dt, const std::filesystem::path &path);
Trajectory LoadTrajectory(const std::filesystem::path &path);

}  // namespace hamrom

#endif  // HAMROM_SNAPSHOTS_HPP
