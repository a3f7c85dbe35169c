// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_DEIM_HPP
#define HAMROM_DEIM_HPP

#include <optional>
#include <vector>
#include <Eigen/LU>
#include "hamrom/hamiltonian.hpp"
#include "hamrom/pod.hpp"

namespace hamrom
{

// Greedy interpolation-point selection. The first point is the largest-magnitude entry of
// psi_1; point l is the largest-magnitude entry of the residual of psi_l after interpolating
// it from the previous l-1 columns at the previous points. Ties go to the lowest index.
// Throws SingularInterpolation naming the step whose residual vanishes.
std::vector<Index> DeimSelect(const Matrix &psi);

// Interpolatory projector P = psi (S^T psi)^{-1} S^T, where S selects the rows in indices.
class DeimModel
{
public:
  // psi: n x s with linearly independent columns. shift_ref is the nonlinear reference
  // G(u0) when psi was built from shifted nonlinear snapshots.
  explicit DeimModel(Matrix psi, std::optional<Vector> shift_ref = std::nullopt);

  const Matrix &psi() const { return psi_; }
  const std::vector<Index> &indices() const { return indices_; }
  const Matrix &interp() const { return interp_; }
  const std::optional<Vector> &shift_ref() const { return shift_ref_; }
  Index n() const { return psi_.rows(); }
  Index s() const { return psi_.cols(); }

  // 2-norm condition number of S^T psi.
  double condition() const { return condition_; }

  // psi (S^T psi)^{-1} f_at_points, i.e. P f for any f whose values at indices() are given.
  Vector Apply(const Vector &f_at_points) const;

  // w = (S^T psi)^{-T} psi^T c. Scattering w onto indices() gives P^T c.
  Vector Weights(const Vector &c) const;

  // The n-vector with w_j at indices()[j] and zero elsewhere.
  Vector Scatter(const Vector &w) const;

private:
  Matrix psi_;
  std::vector<Index> indices_;
  Matrix interp_;
  Eigen::PartialPivLU<Matrix> lu_;
  double condition_ = 0.0;
  std::optional<Vector> shift_ref_;
};

// DEIM model on the basis vectors of a POD of nonlinear snapshots.
DeimModel BuildDeim(const PodBasis &nonlinear_basis);

inline Vector DeimApply(const DeimModel &model, const Vector &f_at_points)
{
  return model.Apply(f_at_points);
}

inline Vector PrecomputeWeights(const DeimModel &model, const Vector &c)
{
  return model.Weights(c);
}

}  // namespace hamrom

#endif  // HAMROM_DEIM_HPP
