// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

// Small wave model with random orthonormal bases, and dense reference formulas for the
// structure-preserving reduced models built on it.

#ifndef HAMROM_TESTS_FIXTURES_HPP
#define HAMROM_TESTS_FIXTURES_HPP

#include <memory>
#include <optional>
#include "hamrom/deim.hpp"
#include "hamrom/pod.hpp"
#include "hamrom/rom.hpp"
#include "hamrom/wave.hpp"
#include "oracles.hpp"

namespace fixture
{

using namespace hamrom;

struct SmallRom
{
  WaveFom fom;
  PodBasis u, v, u_shifted, v_shifted;
  std::optional<DeimModel> deim, deim_shifted;

  Index n() const { return fom.n(); }

  const PodBasis &UBasis(bool shifted) const { return shifted ? u_shifted : u; }
  const PodBasis &VBasis(bool shifted) const { return shifted ? v_shifted : v; }
  const DeimModel &Deim(bool shifted) const { return shifted ? *deim_shifted : *deim; }

  ReducedModel Build(const RomVariant &variant) const
  {
    const bool sh = variant.shifted();
    const DeimModel *d = variant.kind() == RomKind::SpDeim ? &Deim(sh) : nullptr;
    return BuildRom(variant, UBasis(sh), VBasis(sh), fom.system, d);
  }
};

inline PodBasis RandomBasis(oracle::Rng &rng, Index n, Index r, std::optional<Vector> ref)
{
  PodBasis b;
  b.phi = rng.Orthonormal(n, r);
  b.singular_values = Vector::LinSpaced(r, static_cast<double>(r), 1.0);
  b.shift_ref = std::move(ref);
  return b;
}

inline Vector GOf(const Vector &u)
{
  return (1.0 - u.array().cos()).matrix();
}

inline SmallRom MakeSmallRom(std::uint64_t seed, Index n = 20, Index r = 4, Index s = 8)
{
  WaveConfig cfg;
  cfg.n = n;
  SmallRom out{AssembleWaveFom(cfg), {}, {}, {}, {}, std::nullopt, std::nullopt};
  oracle::Rng rng(seed);
  const Vector u0 = out.fom.z0.head(n);
  const Vector v0 = out.fom.z0.tail(n);
  out.u = RandomBasis(rng, n, r, std::nullopt);
  out.v = RandomBasis(rng, n, r, std::nullopt);
  out.u_shifted = RandomBasis(rng, n, r, u0);
  out.v_shifted = RandomBasis(rng, n, r, v0);
  const Matrix psi = rng.Orthonormal(n, s);
  out.deim.emplace(psi);
  out.deim_shifted.emplace(rng.Orthonormal(n, s), GOf(u0));
  return out;
}

// Block-diagonal basis and reference state of a variant.
struct Stacked
{
  oracle::Mat phi;
  oracle::Vec z_ref;
};

inline Stacked Stack(const SmallRom &f, bool shifted)
{
  const Index n = f.n();
  const PodBasis &bu = f.UBasis(shifted);
  const PodBasis &bv = f.VBasis(shifted);
  Stacked st{oracle::Mat::Zero(2 * n, bu.r() + bv.r()), oracle::Vec::Zero(2 * n)};
  st.phi.topLeftCorner(n, bu.r()) = bu.phi;
  st.phi.bottomRightCorner(n, bv.r()) = bv.phi;
  if (shifted)
  {
    st.z_ref.head(n) = *bu.shift_ref;
    st.z_ref.tail(n) = *bv.shift_ref;
  }
  return st;
}

// D_r Phi^T grad H_r(z) with every projector written out as a dense n x n matrix.
inline oracle::Vec DenseSpRhs(const SmallRom &f, const RomVariant &variant, const oracle::Vec &x)
{
  const Index n = f.n();
  const Stacked st = Stack(f, variant.shifted());
  const oracle::Mat &q = f.fom.system.h().q();
  const oracle::Mat &d = f.fom.system.d().matrix();
  const oracle::Vec z = st.phi * x + st.z_ref;
  const oracle::Vec u = z.head(n);
  oracle::Vec grad = q * z;
  if (variant.kind() == RomKind::SpDeim)
  {
    const DeimModel &m = f.Deim(variant.shifted());
    const oracle::Mat proj = oracle::DenseProjector(m.psi(), m.indices());
    grad.head(n) += u.array().sin().matrix().asDiagonal() * (proj.transpose() * oracle::Vec::Ones(n));
  }
  else
  {
    grad.head(n) += u.array().sin().matrix();
  }
  const oracle::Mat d_r = st.phi.transpose() * d * st.phi;
  return d_r * (st.phi.transpose() * grad);
}

inline double DenseSpHamiltonian(const SmallRom &f, const RomVariant &variant, const oracle::Vec &x)
{
  const Index n = f.n();
  const Stacked st = Stack(f, variant.shifted());
  const oracle::Mat &q = f.fom.system.h().q();
  const oracle::Vec z = st.phi * x + st.z_ref;
  const oracle::Vec u = z.head(n);
  double h = 0.5 * z.dot(q * z);
  if (variant.kind() == RomKind::SpDeim)
  {
    const DeimModel &m = f.Deim(variant.shifted());
    const oracle::Mat proj = oracle::DenseProjector(m.psi(), m.indices());
    const oracle::Vec ones = oracle::Vec::Ones(n);
    h += ones.dot(proj * GOf(u));
    if (variant.shifted())
    {
      const oracle::Vec g0 = GOf(f.fom.z0.head(n));
      h += ones.dot((oracle::Mat::Identity(n, n) - proj) * g0);
    }
  }
  else
  {
    h += GOf(u).sum();
  }
  return h;
}

// Counts scalar evaluations of g through a shared counter.
struct CountingSine
{
  std::shared_ptr<std::size_t> g_calls = std::make_shared<std::size_t>(0);

  Nonlinearity Make() const
  {
    Nonlinearity nl = SineNonlinearity();
    auto counter = g_calls;
    nl.g = [counter](double x) {
      ++*counter;
      return std::sin(x);
    };
    return nl;
  }
};

}  // namespace fixture

#endif  // HAMROM_TESTS_FIXTURES_HPP
