// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cstring>
#include <limits>
#include "hamrom/errors.hpp"
#include "hamrom/pod.hpp"
#include "oracles.hpp"

using namespace hamrom;

namespace
{

SnapshotSet FromMatrix(const Matrix &m)
{
  SnapshotSet set;
  set.columns = m;
  for (Index j = 0; j < m.cols(); j++)
  {
    set.sample_steps.push_back(static_cast<std::uint64_t>(j));
  }
  return set;
}

double OrthoDefect(const Matrix &phi)
{
  return (phi.transpose() * phi - Matrix::Identity(phi.cols(), phi.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("rank-one set")
{
  const Vector w = (Vector(4) << 1.0, -3.0, 2.0, 0.5).finished();
  Matrix m(4, 5);
  for (Index j = 0; j < 5; j++)
  {
    m.col(j) = w;
  }
  const PodBasis basis = ComputePod(FromMatrix(m), 1);
  // Largest-magnitude entry (-3) must come out positive.
  CHECK((basis.phi.col(0) + w / w.norm()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(basis.singular_values(0) == doctest::Approx(std::sqrt(5.0) * w.norm()).epsilon(1e-14));
  CHECK(basis.singular_values.size() == 4);
  CHECK(basis.singular_values.tail(3).cwiseAbs().maxCoeff() <= 1e-12 * basis.singular_values(0));
  CHECK_THROWS_AS(ComputePod(FromMatrix(m), 2), RankDeficient);
}

TEST_CASE("complete basis of a square full-rank set")
{
  oracle::Rng rng(1);
  const Matrix m = rng.Matrix(8, 8) + 4.0 * Matrix::Identity(8, 8);
  const PodBasis basis = ComputePod(FromMatrix(m), 8);
  CHECK(OrthoDefect(basis.phi) <= 1e-10);
  CHECK((basis.phi * basis.phi.transpose() * m - m).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(basis.CapturedEnergy() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projection error equals the discarded singular values")
{
  oracle::Rng rng(2);
  const Matrix m = rng.Matrix(20, 12);
  const PodBasis basis = ComputePod(FromMatrix(m), 4);
  const oracle::GramSvd ref = oracle::SvdFromGram(m);
  double tail = 0.0;
  for (Index j = 4; j < 12; j++)
  {
    tail += ref.sigma(j) * ref.sigma(j);
  }
  const double err = (m - basis.phi * basis.phi.transpose() * m).norm();
  CHECK(std::abs(err - std::sqrt(tail)) <= 1e-9);
  for (Index j = 0; j < 12; j++)
  {
    CHECK(std::abs(basis.singular_values(j) - ref.sigma(j)) <= 1e-9);
  }
  CHECK(oracle::MaxPrincipalAngle(basis.phi, ref.u.leftCols(4)) < 1e-8);

  // Residual of the singular pair relation, through the Gram matrix.
  const double s1 = basis.singular_values(0);
  for (Index j = 0; j < 4; j++)
  {
    const double sj = basis.singular_values(j);
    CHECK((m * (m.transpose() * basis.phi.col(j)) - sj * sj * basis.phi.col(j)).norm() <=
          1e-10 * s1 * s1);
  }
}

TEST_CASE("sign convention, determinism and monotone truncation error")
{
  oracle::Rng rng(3);
  const Matrix m = rng.Matrix(30, 10);
  const PodBasis a = ComputePod(FromMatrix(m), 6);
  const PodBasis b = ComputePod(FromMatrix(m), 6);
  CHECK(std::memcmp(a.phi.data(), b.phi.data(), sizeof(double) * 180) == 0);
  for (Index j = 0; j < 6; j++)
  {
    Index arg = 0;
    a.phi.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(a.phi(arg, j) > 0.0);
  }
  double previous = std::numeric_limits<double>::infinity();
  for (Index r = 1; r <= 10; r++)
  {
    const PodBasis basis = ComputePod(FromMatrix(m), r);
    CHECK(OrthoDefect(basis.phi) <= 1e-10);
    const double err = (m - basis.phi * basis.phi.transpose() * m).norm();
    CHECK(err <= previous + 1e-12);
    previous = err;
  }
  CHECK_THROWS_AS(ComputePod(FromMatrix(m), 11), RankDeficient);
  CHECK_THROWS_AS(ComputePod(FromMatrix(m), 0), RankDeficient);
}

TEST_CASE("Project and Reconstruct")
{
  oracle::Rng rng(4);
  SnapshotSet set = FromMatrix(rng.Matrix(15, 9));
  const Vector ref = rng.Vector(15);
  set = Shift(set, ref);
  const PodBasis basis = ComputePod(set, 3);
  REQUIRE(basis.shifted());

  CHECK(Project(basis, ref).norm() <= 1e-15);
  CHECK((Reconstruct(basis, Vector::Zero(3)) - ref).norm() == 0.0);
  const Vector u1 = basis.phi.col(0) + ref;
  CHECK((Project(basis, u1) - Vector::Unit(3, 0)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((Reconstruct(basis, Vector::Unit(3, 0)) - u1).norm() <= 1e-15);

  for (int trial = 0; trial < 10; trial++)
  {
    const Vector u = rng.Vector(15);
    const Vector back = Reconstruct(basis, Project(basis, u));
    // Normal equations: the residual is orthogonal to range(phi).
    CHECK((basis.phi.transpose() * (u - back)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(Project(basis, Vector::Zero(4)), DimensionError);
  CHECK_THROWS_AS(Reconstruct(basis, Vector::Zero(4)), DimensionError);
}

TEST_CASE("basis persistence")
{
  const auto dir = oracle::TempDir("pod");
  oracle::Rng rng(5);
  SnapshotSet set = Shift(FromMatrix(rng.Matrix(12, 7)), rng.Vector(12));
  const PodBasis basis = ComputePod(set, 4);
  PersistBasis(basis, dir / "b.hrsnap");
  const PodBasis back = LoadBasis(dir / "b.hrsnap");
  CHECK(back.phi == basis.phi);
  CHECK(back.singular_values == basis.singular_values);
  REQUIRE(back.shifted());
  CHECK(*back.shift_ref == *basis.shift_ref);

  Persist(set, dir / "s.hrsnap");
  CHECK_THROWS_AS(LoadBasis(dir / "s.hrsnap"), FormatError);
}
