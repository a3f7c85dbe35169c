// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/pod.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <Eigen/SVD>
#include "hamrom/binary_io.hpp"
#include "hamrom/errors.hpp"

namespace hamrom
{

namespace
{

constexpr double RANK_TOL = 1.0e-12;
constexpr std::string_view BASIS_MAGIC = "HRSNAP01";

void FixSigns(Matrix &phi)
{
  for (Index j = 0; j < phi.cols(); j++)
  {
    Index pivot = 0;
    double largest = -1.0;
    for (Index i = 0; i < phi.rows(); i++)
    {
      const double mag = std::abs(phi(i, j));
      if (mag > largest)
      {
        largest = mag;
        pivot = i;
      }
    }
    if (phi(pivot, j) < 0.0)
    {
      phi.col(j) *= -1.0;
    }
  }
}

}  // namespace

double PodBasis::CapturedEnergy() const
{
  const double total = singular_values.squaredNorm();
  if (total == 0.0)
  {
    return 0.0;
  }
  return singular_values.head(r()).squaredNorm() / total;
}

PodBasis ComputePod(const SnapshotSet &set, Index r)
{
  set.Validate();
  const Index max_rank = std::min(set.n(), set.count());
  if (r < 1 || r > max_rank)
  {
    std::ostringstream msg;
    msg << "POD rank r = " << r << " outside [1, " << max_rank << "] for a " << set.n() << "x"
        << set.count() << " snapshot set";
    throw RankDeficient(msg.str());
  }

  Eigen::BDCSVD<Matrix> svd(set.columns, Eigen::ComputeThinU);
  const Vector &sigma = svd.singularValues();
  if (!(sigma(r - 1) > RANK_TOL * sigma(0)))
  {
    std::ostringstream msg;
    msg << "snapshot set is rank deficient at r = " << r << ": sigma_r = " << sigma(r - 1)
        << ", sigma_1 = " << sigma(0);
    throw RankDeficient(msg.str());
  }

  PodBasis basis;
  basis.phi = svd.matrixU().leftCols(r);
  FixSigns(basis.phi);
  basis.singular_values = sigma;
  basis.shift_ref = set.shift_ref;
  return basis;
}

Vector Project(const PodBasis &basis, const Vector &u)
{
  detail::CheckDim(u.size(), basis.n(), "Project state");
  if (basis.shift_ref)
  {
    return basis.phi.transpose() * (u - *basis.shift_ref);
  }
  return basis.phi.transpose() * u;
}

Vector Reconstruct(const PodBasis &basis, const Vector &a)
{
  detail::CheckDim(a.size(), basis.r(), "Reconstruct coefficients");
  Vector u = basis.phi * a;
  if (basis.shift_ref)
  {
    u += *basis.shift_ref;
  }
  return u;
}

void PersistBasis(const PodBasis &basis, const std::filesystem::path &path)
{
  SnapshotSet set;
  set.kind = SnapshotKind::Basis;
  set.columns = basis.phi;
  set.sample_steps.resize(static_cast<std::size_t>(basis.r()));
  std::iota(set.sample_steps.begin(), set.sample_steps.end(), std::uint64_t{0});
  set.shift_ref = basis.shift_ref;

  io::BinaryWriter w(path);
  w.Magic(BASIS_MAGIC);
  detail::WriteSnapshotBody(w, set);
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(basis.singular_values.size()));
  w.Vec(basis.singular_values);
  w.Close();
}

PodBasis LoadBasis(const std::filesystem::path &path)
{
  io::BinaryReader r(path);
  r.ExpectMagic(BASIS_MAGIC);
  SnapshotSet set = detail::ReadSnapshotBody(r);
  if (set.kind != SnapshotKind::Basis)
  {
    throw FormatError(path.string() + ": snapshot container of kind " + ToString(set.kind) +
                      " is not a basis");
  }
  const auto count = r.Scalar<std::uint64_t>("singular_values");
  PodBasis basis;
  basis.phi = std::move(set.columns);
  basis.shift_ref = std::move(set.shift_ref);
  basis.singular_values = r.Vec(count, "singular_values");
  if (!r.AtEnd())
  {
    throw FormatError(path.string() + ": trailing bytes after basis payload");
  }
  return basis;
}

}  // namespace hamrom
