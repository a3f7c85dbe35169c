// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_HAMILTONIAN_HPP
#define HAMROM_HAMILTONIAN_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>
#include <Eigen/Dense>

namespace hamrom
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Elementwise scalar nonlinearity G with its derivative g = G'. Both act identically on
// every coordinate; the per-coordinate weighting lives in SplitHamiltonian::c.
struct Nonlinearity
{
  std::string name;
  std::function<double(double)> G;
  std::function<double(double)> g;
};

// G(x) = 1 - cos(x), g(x) = sin(x).
Nonlinearity SineNonlinearity();

// G = g = 0 (linear Hamiltonian).
Nonlinearity ZeroNonlinearity();

// Looks up one of the named nonlinearities above ("sine", "none"). Throws ConfigError.
Nonlinearity NonlinearityByName(const std::string &name);

// Central finite-difference check of g against G on the given sample points. Returns the
// largest relative discrepancy max |g(x) - (G(x+h) - G(x-h)) / 2h| / max(1, |g(x)|).
double DerivativeMismatch(const Nonlinearity &nl, std::span<const double> samples,
                          double step = 1.0e-6);

// true iff ||M^T + M||_max <= tol. Throws DimensionError for non-square input.
bool CheckSkew(const Matrix &m, double tol);

// Constant skew-symmetric coefficient matrix D of u' = D grad H(u).
class SkewOperator
{
public:
  explicit SkewOperator(Matrix d);

  const Matrix &matrix() const { return d_; }
  Index dim() const { return d_.rows(); }

private:
  Matrix d_;
};

// H(u) = 1/2 u^T Q u + sum_i c_i G(u_i).
class SplitHamiltonian
{
public:
  SplitHamiltonian(Matrix q, Nonlinearity nl, Vector c);

  const Matrix &q() const { return q_; }
  const Vector &c() const { return c_; }
  const Nonlinearity &nonlinearity() const { return nl_; }
  Index dim() const { return q_.rows(); }

  // Coordinates with c_i != 0, ascending. Only these coordinates carry nonlinearity.
  const std::vector<Index> &support() const { return support_; }

private:
  Matrix q_;
  Nonlinearity nl_;
  Vector c_;
  std::vector<Index> support_;
};

class HamiltonianSystem
{
public:
  HamiltonianSystem(SkewOperator d, SplitHamiltonian h);

  const SkewOperator &d() const { return d_; }
  const SplitHamiltonian &h() const { return h_; }
  Index dim() const { return d_.dim(); }

private:
  SkewOperator d_;
  SplitHamiltonian h_;
};

double EvalHamiltonian(const SplitHamiltonian &h, const Vector &u);

// Qu + c (.) g(u). The diagonal Jacobian of G is never formed.
Vector EvalGradient(const SplitHamiltonian &h, const Vector &u);

// D grad H(u).
Vector Rhs(const HamiltonianSystem &sys, const Vector &u);

}  // namespace hamrom

#endif  // HAMROM_HAMILTONIAN_HPP
