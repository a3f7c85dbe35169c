// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include "hamrom/errors.hpp"

namespace hamrom
{

namespace
{

constexpr double SKEW_TOL = 1.0e-12;
constexpr double SYMMETRY_TOL = 1.0e-12;
constexpr double DERIVATIVE_TOL = 1.0e-6;

// Sample points for validating g = G' at construction.
constexpr std::array<double, 7> DERIVATIVE_SAMPLES = {-2.5, -1.0, -0.3, 0.0, 0.4, 1.1, 2.7};

}  // namespace

Nonlinearity SineNonlinearity()
{
  return {"sine", [](double x) { return 1.0 - std::cos(x); },
          [](double x) { return std::sin(x); }};
}

Nonlinearity ZeroNonlinearity()
{
  return {"none", [](double) { return 0.0; }, [](double) { return 0.0; }};
}

Nonlinearity NonlinearityByName(const std::string &name)
{
  if (name == "sine")
  {
    return SineNonlinearity();
  }
  if (name == "none")
  {
    return ZeroNonlinearity();
  }
  throw ConfigError("unknown nonlinearity \"" + name + "\"");
}

double DerivativeMismatch(const Nonlinearity &nl, std::span<const double> samples, double step)
{
  double worst = 0.0;
  for (double x : samples)
  {
    const double fd = (nl.G(x + step) - nl.G(x - step)) / (2.0 * step);
    const double exact = nl.g(x);
    worst = std::max(worst, std::abs(exact - fd) / std::max(1.0, std::abs(exact)));
  }
  return worst;
}

bool CheckSkew(const Matrix &m, double tol)
{
  if (m.rows() != m.cols())
  {
    throw DimensionError("CheckSkew: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
  if (m.size() == 0)
  {
    return true;
  }
  return (m.transpose() + m).cwiseAbs().maxCoeff() <= tol;
}

SkewOperator::SkewOperator(Matrix d) : d_(std::move(d))
{
  const double scale = d_.size() > 0 ? std::max(1.0, d_.cwiseAbs().maxCoeff()) : 1.0;
  if (!CheckSkew(d_, SKEW_TOL * scale))
  {
    throw ConfigError("SkewOperator: matrix is not skew-symmetric");
  }
}

SplitHamiltonian::SplitHamiltonian(Matrix q, Nonlinearity nl, Vector c)
  : q_(std::move(q)), nl_(std::move(nl)), c_(std::move(c))
{
  if (q_.rows() != q_.cols())
  {
    throw DimensionError("SplitHamiltonian: Q must be square");
  }
  detail::CheckDim(c_.size(), q_.rows(), "SplitHamiltonian weight vector");
  if (q_.size() > 0 && (q_ - q_.transpose()).cwiseAbs().maxCoeff() > SYMMETRY_TOL)
  {
    throw ConfigError("SplitHamiltonian: Q is not symmetric");
  }
  if (!nl_.G || !nl_.g)
  {
    throw ConfigError("SplitHamiltonian: nonlinearity \"" + nl_.name + "\" is incomplete");
  }
  if (DerivativeMismatch(nl_, DERIVATIVE_SAMPLES) > DERIVATIVE_TOL)
  {
    throw ConfigError("SplitHamiltonian: g is not the derivative of G for \"" + nl_.name +
                      "\"");
  }
  for (Index i = 0; i < c_.size(); i++)
  {
    if (c_(i) != 0.0)
    {
      support_.push_back(i);
    }
  }
}

HamiltonianSystem::HamiltonianSystem(SkewOperator d, SplitHamiltonian h)
  : d_(std::move(d)), h_(std::move(h))
{
  if (d_.dim() != h_.dim())
  {
    throw DimensionError("HamiltonianSystem: D is " + std::to_string(d_.dim()) +
                         "-dimensional but Q is " + std::to_string(h_.dim()) +
                         "-dimensional");
  }
}

double EvalHamiltonian(const SplitHamiltonian &h, const Vector &u)
{
  detail::CheckDim(u.size(), h.dim(), "EvalHamiltonian state");
  double value = 0.5 * u.dot(h.q() * u);
  for (Index i : h.support())
  {
    value += h.c()(i) * h.nonlinearity().G(u(i));
  }
  return value;
}

Vector EvalGradient(const SplitHamiltonian &h, const Vector &u)
{
  detail::CheckDim(u.size(), h.dim(), "EvalGradient state");
  Vector grad = h.q() * u;
  for (Index i : h.support())
  {
    grad(i) += h.c()(i) * h.nonlinearity().g(u(i));
  }
  return grad;
}

Vector Rhs(const HamiltonianSystem &sys, const Vector &u)
{
  detail::CheckDim(u.size(), sys.dim(), "Rhs state");
  return sys.d().matrix() * EvalGradient(sys.h(), u);
}

}  // namespace hamrom
