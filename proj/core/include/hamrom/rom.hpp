// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_ROM_HPP
#define HAMROM_ROM_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>
#include "hamrom/deim.hpp"
#include "hamrom/hamiltonian.hpp"
#include "hamrom/pod.hpp"

namespace hamrom
{

enum class RomKind : std::uint32_t
{
  GRom = 0,   // plain Galerkin projection of the full right-hand side
  SpPod = 1,  // reduced skew operator, exact nonlinear term
  SpDeim = 2, // reduced skew operator, DEIM-reduced Hamiltonian
};

class RomVariant
{
public:
  // Throws ConfigError for a shifted Galerkin model.
  RomVariant(RomKind kind, bool shifted);

  RomKind kind() const { return kind_; }
  bool shifted() const { return shifted_; }
  bool structure_preserving() const { return kind_ != RomKind::GRom; }

  // "g-rom", "sp-pod-1", "sp-pod-2", "sp-deim-1", "sp-deim-2".
  std::string Name() const;

  // Inverse of Name(). Throws ConfigError.
  static RomVariant Parse(const std::string &name);

  // All five supported variants in table order.
  static std::vector<RomVariant> All();

  friend bool operator==(const RomVariant &, const RomVariant &) = default;

private:
  RomKind kind_;
  bool shifted_;
};

// Offline data of a reduced model with state z ~ phi (a; b) + z_ref, where
// phi = blkdiag(phi_u, phi_v).
//
// Structure-preserving variants evaluate
//   rhs = d_r [q_r x + q_offset + sample_rows^T (sample_weights (.) g(sample_rows x + sample_ref))]
//   H_r = 1/2 x^T q_r x + x^T q_offset + h_ref + sample_weights^T G(sample_rows x + sample_ref)
//         + h_const
// with d_r = phi^T D phi, q_r = phi^T Q phi, q_offset = phi^T Q z_ref, h_ref = H_quad(z_ref).
// For SP-POD the sample set is the whole nonlinear support with the weights c; for SP-DEIM
// it is the s DEIM points with weights w = (S^T psi)^{-T} psi^T c, and h_const carries the
// constant c^T (I - P) G(u0) of the shifted model.
//
// The Galerkin model evaluates
//   rhs = galerkin_lin x + galerkin_offset + galerkin_nl g(sample_rows x + sample_ref)
// and shares H_r with SP-POD.
struct ReducedOperators
{
  RomVariant variant{RomKind::SpPod, false};
  std::string nonlinearity;
  Index full_dim = 0;
  Index n_u = 0;
  Index r_u = 0;
  Index r_v = 0;

  Matrix phi;
  Vector z_ref;

  Matrix d_r;
  Matrix q_r;
  Vector q_offset;
  double h_ref = 0.0;

  Matrix galerkin_lin;
  Vector galerkin_offset;
  Matrix galerkin_nl;

  std::vector<Index> sample_index;  // full-state coordinates of the sampled rows
  Matrix sample_rows;
  Vector sample_ref;
  Vector sample_weights;
  double h_const = 0.0;

  Index deim_s = 0;
  double deim_condition = 0.0;

  Index r() const { return r_u + r_v; }
};

class ReducedModel
{
public:
  // Throws ConfigError if nl.name differs from ops.nonlinearity.
  ReducedModel(ReducedOperators ops, Nonlinearity nl);

  const ReducedOperators &ops() const { return ops_; }
  const RomVariant &variant() const { return ops_.variant; }
  const Nonlinearity &nonlinearity() const { return nl_; }
  Index r() const { return ops_.r(); }
  Index full_dim() const { return ops_.full_dim; }

  // Same operators with an instrumented (or otherwise replaced) nonlinearity of the same
  // name.
  ReducedModel WithNonlinearity(Nonlinearity nl) const;

  Vector Rhs(const Vector &x) const;
  double Hamiltonian(const Vector &x) const;

  // Zero for shifted variants, phi^T z0 otherwise.
  Vector InitialCoefficients(const Vector &z0) const;

  // phi x + z_ref.
  Vector Reconstruct(const Vector &x) const;

private:
  // sample_rows x + sample_ref.
  Vector SampledState(const Vector &x) const;

  ReducedOperators ops_;
  Nonlinearity nl_;
};

// Assembles the offline operators of a variant from block POD bases of a Hamiltonian system
// whose state is (u; v) with u of length u_basis.n(). The nonlinear support (c != 0) must be
// the coordinates a DEIM model was built on, in order. deim is required iff the variant is
// SP-DEIM. Shifted variants need shifted bases; their reference state is (u0; v0) from the
// bases' shift references.
ReducedModel BuildRom(const RomVariant &variant, const PodBasis &u_basis,
                      const PodBasis &v_basis, const HamiltonianSystem &fom,
                      const DeimModel *deim = nullptr);

inline Vector ReducedRhs(const ReducedModel &model, const Vector &x) { return model.Rhs(x); }

inline double ReducedHamiltonian(const ReducedModel &model, const Vector &x)
{
  return model.Hamiltonian(x);
}

inline Vector InitialCoefficients(const ReducedModel &model, const Vector &z0)
{
  return model.InitialCoefficients(z0);
}

// Container "HRROM001": little-endian header, variant, dimensions and every offline
// operator as f64 payloads. The nonlinearity is stored by name.
void PersistRom(const ReducedModel &model, const std::filesystem::path &path);
ReducedModel LoadRom(const std::filesystem::path &path);

}  // namespace hamrom

#endif  // HAMROM_ROM_HPP
