// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_WAVE_HPP
#define HAMROM_WAVE_HPP

#include "hamrom/hamiltonian.hpp"

namespace hamrom
{

// Periodic 1-D nonlinear wave u_tt = c^2 u_xx - g(u) on [0, length). Grid points are
// x_i = i dx, i = 0..n-1, with dx = length / n; x = length wraps onto x_0.
struct WaveConfig
{
  double c_speed = 0.1;
  double length = 1.0;
  Index n = 500;

  double dx() const { return length / static_cast<double>(n); }
  void Validate() const;
};

// Dense periodic three-point second-difference matrix scaled by c^2 / dx^2.
Matrix BuildLaplacian(const WaveConfig &cfg);

// out = A u without forming A.
void ApplyLaplacian(const WaveConfig &cfg, const Vector &u, Vector &out);

// Three-branch cubic spline bump: 1 - 3/2 s^2 + 3/4 s^3 on [0,1], (2-s)^3/4 on (1,2], 0
// beyond.
double SplineProfile(double s);

// u0_i = f(10 |x_i - 1/2|).
Vector SplineInitialCondition(const WaveConfig &cfg);

// The 2n-dimensional semi-discrete wave as a Hamiltonian system with state z = (u; v),
// D = [[0, I], [-I, 0]], Q = blkdiag(-A, I) and the nonlinearity active on the u-block.
struct WaveFom
{
  WaveConfig cfg;
  Matrix laplacian;
  HamiltonianSystem system;
  Vector z0;  // (spline profile; 0)

  Index n() const { return cfg.n; }

  // Matrix-free rhs (v; A u - g(u)). Agrees with Rhs(system, z) to rounding.
  Vector FastRhs(const Vector &z) const;

  // Matrix-free 1/2 v^T v - 1/2 u^T A u + sum G(u_i).
  double FastHamiltonian(const Vector &z) const;
};

WaveFom AssembleWaveFom(const WaveConfig &cfg, Nonlinearity nl = SineNonlinearity());

}  // namespace hamrom

#endif  // HAMROM_WAVE_HPP
