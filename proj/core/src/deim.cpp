// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/deim.hpp"

#include <cmath>
#include <Eigen/SVD>
#include "hamrom/errors.hpp"

namespace hamrom
{

namespace
{

constexpr double RESIDUAL_TOL = 1.0e-13;

// First index of the largest |v_i|.
Index ArgMaxAbs(const Vector &v)
{
  Index best = 0;
  double largest = -1.0;
  for (Index i = 0; i < v.size(); i++)
  {
    const double mag = std::abs(v(i));
    if (mag > largest)
    {
      largest = mag;
      best = i;
    }
  }
  return best;
}

Matrix SelectRows(const Matrix &m, const std::vector<Index> &rows, Index cols)
{
  Matrix out(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); i++)
  {
    out.row(static_cast<Index>(i)) = m.row(rows[i]).head(cols);
  }
  return out;
}

}  // namespace

std::vector<Index> DeimSelect(const Matrix &psi)
{
  const Index n = psi.rows();
  const Index s = psi.cols();
  if (s < 1 || s > n)
  {
    throw DimensionError("DeimSelect: need 1 <= s <= n, got s = " + std::to_string(s) +
                         ", n = " + std::to_string(n));
  }
  std::vector<Index> indices;
  indices.reserve(static_cast<std::size_t>(s));

  const Vector first = psi.col(0);
  if (!(first.lpNorm<Eigen::Infinity>() > 0.0))
  {
    throw SingularInterpolation("DeimSelect: step 1: first basis vector is zero", 1);
  }
  indices.push_back(ArgMaxAbs(first));

  for (Index l = 1; l < s; l++)
  {
    const Matrix pt_psi = SelectRows(psi, indices, l);
    Vector rhs(l);
    for (Index i = 0; i < l; i++)
    {
      rhs(i) = psi(indices[static_cast<std::size_t>(i)], l);
    }
    const Vector coeff = pt_psi.partialPivLu().solve(rhs);
    const Vector residual = psi.col(l) - psi.leftCols(l) * coeff;
    const double scale = std::max(psi.col(l).lpNorm<Eigen::Infinity>(), 1.0e-300);
    if (!(residual.lpNorm<Eigen::Infinity>() > RESIDUAL_TOL * scale))
    {
      throw SingularInterpolation("DeimSelect: step " + std::to_string(l + 1) +
                                      ": interpolation matrix is singular",
                                  static_cast<std::size_t>(l + 1));
    }
    indices.push_back(ArgMaxAbs(residual));
  }
  return indices;
}

DeimModel::DeimModel(Matrix psi, std::optional<Vector> shift_ref)
  : psi_(std::move(psi)), shift_ref_(std::move(shift_ref))
{
  if (shift_ref_)
  {
    detail::CheckDim(shift_ref_->size(), psi_.rows(), "DEIM nonlinear shift reference");
  }
  indices_ = DeimSelect(psi_);
  interp_ = SelectRows(psi_, indices_, psi_.cols());
  lu_.compute(interp_);
  Eigen::JacobiSVD<Matrix> svd(interp_);
  const Vector &sigma = svd.singularValues();
  condition_ = sigma(sigma.size() - 1) > 0.0 ? sigma(0) / sigma(sigma.size() - 1)
                                             : std::numeric_limits<double>::infinity();
}

Vector DeimModel::Apply(const Vector &f_at_points) const
{
  detail::CheckDim(f_at_points.size(), s(), "DeimApply sampled values");
  return psi_ * lu_.solve(f_at_points);
}

Vector DeimModel::Weights(const Vector &c) const
{
  detail::CheckDim(c.size(), n(), "DEIM weight vector");
  return lu_.transpose().solve(psi_.transpose() * c);
}

Vector DeimModel::Scatter(const Vector &w) const
{
  detail::CheckDim(w.size(), s(), "DEIM scatter weights");
  Vector out = Vector::Zero(n());
  for (std::size_t j = 0; j < indices_.size(); j++)
  {
    out(indices_[j]) = w(static_cast<Index>(j));
  }
  return out;
}

DeimModel BuildDeim(const PodBasis &nonlinear_basis)
{
  return DeimModel(nonlinear_basis.phi, nonlinear_basis.shift_ref);
}

}  // namespace hamrom
