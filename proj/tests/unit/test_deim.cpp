// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include "hamrom/deim.hpp"
#include "hamrom/errors.hpp"
#include "oracles.hpp"

using namespace hamrom;

TEST_CASE("single column picks the largest magnitude")
{
  const Matrix psi = (Matrix(3, 1) << 0.2, -0.9, 0.1).finished();
  CHECK(DeimSelect(psi) == std::vector<Index>{1});
}

TEST_CASE("ties go to the lowest index")
{
  const Matrix psi = (Matrix(4, 1) << 0.1, -0.7, 0.7, 0.1).finished();
  CHECK(DeimSelect(psi) == std::vector<Index>{1});
}

TEST_CASE("canonical columns")
{
  Matrix psi = Matrix::Zero(10, 2);
  psi(3, 0) = 1.0;
  psi(7, 1) = 1.0;
  CHECK(DeimSelect(psi) == std::vector<Index>{3, 7});

  // Residual of column 2 after interpolating from point 3 is e_7 itself.
  const Matrix pp = psi.block(3, 0, 1, 1);
  const Vector coef = pp.fullPivLu().solve(psi.block(3, 1, 1, 1));
  const Vector residual = psi.col(1) - psi.leftCols(1) * coef;
  CHECK((residual - Vector::Unit(10, 7)).norm() == 0.0);
}

TEST_CASE("selection matches the straight-line greedy oracle")
{
  oracle::Rng rng(12);
  const Matrix psi = rng.Orthonormal(12, 3);
  CHECK(DeimSelect(psi) == oracle::GreedyPoints(psi));
  for (int trial = 0; trial < 50; trial++)
  {
    const Index n = rng.Int(5, 60);
    const Index s = rng.Int(1, std::min<Index>(n, 15));
    const Matrix random = rng.Orthonormal(n, s);
    CHECK(DeimSelect(random) == oracle::GreedyPoints(random));
  }
  CHECK(DeimSelect(psi) == DeimSelect(psi));
}

TEST_CASE("singular interpolation names the step")
{
  Matrix psi(5, 3);
  psi.col(0) = Vector::Unit(5, 0);
  psi.col(1) = Vector::Unit(5, 2);
  psi.col(2) = 2.0 * Vector::Unit(5, 2);
  try
  {
    DeimSelect(psi);
    FAIL("expected SingularInterpolation");
  }
  catch (const SingularInterpolation &e)
  {
    CHECK(e.step() == 3);
  }
  CHECK_THROWS_AS(DeimSelect(Matrix::Zero(4, 1)), SingularInterpolation);
  CHECK_THROWS_AS(DeimSelect(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("DeimApply: span exactness, interpolation and the dense projector")
{
  oracle::Rng rng(13);
  const Matrix psi = rng.Orthonormal(20, 5);
  const DeimModel model(psi);
  const oracle::Mat proj = oracle::DenseProjector(psi, model.indices());
  CHECK(model.condition() >= 1.0);
  CHECK(model.s() == 5);

  auto at_points = [&](const Vector &f) {
    Vector out(model.s());
    for (Index j = 0; j < model.s(); j++)
    {
      out(j) = f(model.indices()[static_cast<std::size_t>(j)]);
    }
    return out;
  };

  for (Index j = 0; j < 5; j++)
  {
    const Vector f = psi.col(j);
    CHECK((DeimApply(model, at_points(f)) - f).cwiseAbs().maxCoeff() <= 1e-10);
  }
  for (int trial = 0; trial < 10; trial++)
  {
    const Vector f = rng.Vector(20);
    const Vector approx = DeimApply(model, at_points(f));
    CHECK((at_points(approx) - at_points(f)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((approx - proj * f).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK((proj * proj - proj).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(DeimApply(model, Vector::Zero(4)), DimensionError);
}

TEST_CASE("weights collapse P^T c onto the points")
{
  const Matrix ek = Matrix(Vector::Unit(6, 4));
  const DeimModel single(ek);
  const Vector w1 = PrecomputeWeights(single, Vector::Ones(6));
  CHECK(w1.size() == 1);
  CHECK(w1(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((single.Scatter(w1) - Vector::Unit(6, 4)).norm() <= 1e-15);

  oracle::Rng rng(14);
  const Matrix psi = rng.Orthonormal(15, 4);
  const DeimModel model(psi);
  CHECK(PrecomputeWeights(model, Vector::Zero(15)).norm() == 0.0);

  const oracle::Mat proj = oracle::DenseProjector(psi, model.indices());
  for (int trial = 0; trial < 10; trial++)
  {
    const Vector c = rng.Vector(15);
    const Vector scattered = model.Scatter(PrecomputeWeights(model, c));
    CHECK((scattered - proj.transpose() * c).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("BuildDeim keeps the nonlinear shift reference")
{
  oracle::Rng rng(15);
  PodBasis basis;
  basis.phi = rng.Orthonormal(9, 3);
  basis.singular_values = Vector::Ones(3);
  basis.shift_ref = rng.Vector(9);
  const DeimModel model = BuildDeim(basis);
  REQUIRE(model.shift_ref().has_value());
  CHECK(*model.shift_ref() == *basis.shift_ref);
  CHECK_THROWS_AS(DeimModel(basis.phi, Vector::Zero(3)), DimensionError);
}
