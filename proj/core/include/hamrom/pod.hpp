// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_POD_HPP
#define HAMROM_POD_HPP

#include <filesystem>
#include <optional>
#include "hamrom/hamiltonian.hpp"
#include "hamrom/snapshots.hpp"

namespace hamrom
{

// Leading r left singular vectors of a snapshot matrix. For a basis built from shifted
// snapshots the affine approximation is u ~ phi a + shift_ref.
struct PodBasis
{
  Matrix phi;
  Vector singular_values;  // all min(n, M) values, nonincreasing
  std::optional<Vector> shift_ref;

  Index n() const { return phi.rows(); }
  Index r() const { return phi.cols(); }
  bool shifted() const { return shift_ref.has_value(); }

  // sum_{j<r} sigma_j^2 / sum_j sigma_j^2.
  double CapturedEnergy() const;
};

// Thin SVD truncated to rank r. Each column is sign-normalized so that its entry of
// largest magnitude (lowest index on ties) is positive. Throws RankDeficient when
// r > min(n, M) or sigma_r <= 1e-12 sigma_1.
PodBasis ComputePod(const SnapshotSet &set, Index r);

// phi^T (u - shift_ref).
Vector Project(const PodBasis &basis, const Vector &u);

// phi a + shift_ref.
Vector Reconstruct(const PodBasis &basis, const Vector &a);

// Snapshot container with kind = basis (columns = phi), followed by u64 count and the
// singular values as f64.
void PersistBasis(const PodBasis &basis, const std::filesystem::path &path);
PodBasis LoadBasis(const std::filesystem::path &path);

}  // namespace hamrom

#endif  // HAMROM_POD_HPP
