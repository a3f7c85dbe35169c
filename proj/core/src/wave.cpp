// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/wave.hpp"

#include <cmath>
#include "hamrom/errors.hpp"

namespace hamrom
{

void WaveConfig::Validate() const
{
  if (n < 3)
  {
    throw ConfigError("wave grid needs at least 3 points, got n = " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length))
  {
    throw ConfigError("wave domain length must be positive");
  }
  if (!std::isfinite(c_speed))
  {
    throw ConfigError("wave speed must be finite");
  }
}

Matrix BuildLaplacian(const WaveConfig &cfg)
{
  cfg.Validate();
  const Index n = cfg.n;
  const double k = cfg.c_speed * cfg.c_speed / (cfg.dx() * cfg.dx());
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; i++)
  {
    a(i, i) = -2.0 * k;
    a(i, (i + 1) % n) = k;
    a(i, (i + n - 1) % n) = k;
  }
  return a;
}

void ApplyLaplacian(const WaveConfig &cfg, const Vector &u, Vector &out)
{
  const Index n = cfg.n;
  detail::CheckDim(u.size(), n, "ApplyLaplacian input");
  const double k = cfg.c_speed * cfg.c_speed / (cfg.dx() * cfg.dx());
  out.resize(n);
  out(0) = k * (u(n - 1) - 2.0 * u(0) + u(1));
  for (Index i = 1; i < n - 1; i++)
  {
    out(i) = k * (u(i - 1) - 2.0 * u(i) + u(i + 1));
  }
  out(n - 1) = k * (u(n - 2) - 2.0 * u(n - 1) + u(0));
}

double SplineProfile(double s)
{
  if (s <= 1.0)
  {
    return 1.0 - 1.5 * s * s + 0.75 * s * s * s;
  }
  if (s <= 2.0)
  {
    const double t = 2.0 - s;
    return 0.25 * t * t * t;
  }
  return 0.0;
}

Vector SplineInitialCondition(const WaveConfig &cfg)
{
  cfg.Validate();
  Vector u0(cfg.n);
  for (Index i = 0; i < cfg.n; i++)
  {
    const double x = static_cast<double>(i) * cfg.dx();
    u0(i) = SplineProfile(10.0 * std::abs(x - 0.5));
  }
  return u0;
}

Vector WaveFom::FastRhs(const Vector &z) const
{
  const Index nn = cfg.n;
  detail::CheckDim(z.size(), 2 * nn, "WaveFom::FastRhs state");
  Vector out(2 * nn);
  out.head(nn) = z.tail(nn);
  Vector au;
  ApplyLaplacian(cfg, z.head(nn), au);
  const auto &g = system.h().nonlinearity().g;
  for (Index i = 0; i < nn; i++)
  {
    out(nn + i) = au(i) - g(z(i));
  }
  return out;
}

double WaveFom::FastHamiltonian(const Vector &z) const
{
  const Index nn = cfg.n;
  detail::CheckDim(z.size(), 2 * nn, "WaveFom::FastHamiltonian state");
  Vector au;
  ApplyLaplacian(cfg, z.head(nn), au);
  double value = 0.5 * z.tail(nn).squaredNorm() - 0.5 * z.head(nn).dot(au);
  const auto &G = system.h().nonlinearity().G;
  for (Index i = 0; i < nn; i++)
  {
    value += G(z(i));
  }
  return value;
}

WaveFom AssembleWaveFom(const WaveConfig &cfg, Nonlinearity nl)
{
  cfg.Validate();
  const Index n = cfg.n;
  Matrix a = BuildLaplacian(cfg);

  Matrix d = Matrix::Zero(2 * n, 2 * n);
  d.topRightCorner(n, n) = Matrix::Identity(n, n);
  d.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);

  Matrix q = Matrix::Zero(2 * n, 2 * n);
  q.topLeftCorner(n, n) = -a;
  q.bottomRightCorner(n, n) = Matrix::Identity(n, n);

  Vector c = Vector::Zero(2 * n);
  c.head(n).setOnes();

  Vector z0 = Vector::Zero(2 * n);
  z0.head(n) = SplineInitialCondition(cfg);

  return WaveFom{cfg, std::move(a),
                 HamiltonianSystem(SkewOperator(std::move(d)),
                                   SplitHamiltonian(std::move(q), std::move(nl), std::move(c))),
                 std::move(z0)};
}

}  // namespace hamrom
