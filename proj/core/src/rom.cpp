// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/rom.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include "hamrom/binary_io.hpp"
#include "hamrom/errors.hpp"

namespace hamrom
{

namespace
{

constexpr double SKEW_TOL = 1.0e-12;
constexpr double SHIFT_MATCH_TOL = 1.0e-12;
constexpr std::string_view ROM_MAGIC = "HRROM001";
constexpr std::uint32_t ROM_VERSION = 1;

struct VariantName
{
  RomKind kind;
  bool shifted;
  const char *name;
};

constexpr std::array<VariantName, 5> VARIANT_NAMES = {{
    {RomKind::GRom, false, "g-rom"},
    {RomKind::SpPod, false, "sp-pod-1"},
    {RomKind::SpPod, true, "sp-pod-2"},
    {RomKind::SpDeim, false, "sp-deim-1"},
    {RomKind::SpDeim, true, "sp-deim-2"},
}};

Matrix RowsOf(const Matrix &m, const std::vector<Index> &rows)
{
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); i++)
  {
    out.row(static_cast<Index>(i)) = m.row(rows[i]);
  }
  return out;
}

Vector EntriesOf(const Vector &v, const std::vector<Index> &idx)
{
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); i++)
  {
    out(static_cast<Index>(i)) = v(idx[i]);
  }
  return out;
}

}  // namespace

RomVariant::RomVariant(RomKind kind, bool shifted) : kind_(kind), shifted_(shifted)
{
  if (kind == RomKind::GRom && shifted)
  {
    throw ConfigError("the Galerkin ROM has no shifted variant");
  }
}

std::string RomVariant::Name() const
{
  for (const auto &entry : VARIANT_NAMES)
  {
    if (entry.kind == kind_ && entry.shifted == shifted_)
    {
      return entry.name;
    }
  }
  return "unknown";
}

RomVariant RomVariant::Parse(const std::string &name)
{
  for (const auto &entry : VARIANT_NAMES)
  {
    if (name == entry.name)
    {
      return RomVariant(entry.kind, entry.shifted);
    }
  }
  throw ConfigError("unknown ROM variant \"" + name + "\"");
}

std::vector<RomVariant> RomVariant::All()
{
  std::vector<RomVariant> all;
  for (const auto &entry : VARIANT_NAMES)
  {
    all.emplace_back(entry.kind, entry.shifted);
  }
  return all;
}

ReducedModel::ReducedModel(ReducedOperators ops, Nonlinearity nl)
  : ops_(std::move(ops)), nl_(std::move(nl))
{
  if (nl_.name != ops_.nonlinearity)
  {
    throw ConfigError("reduced model was built for nonlinearity \"" + ops_.nonlinearity +
                      "\", got \"" + nl_.name + "\"");
  }
}

ReducedModel ReducedModel::WithNonlinearity(Nonlinearity nl) const
{
  return ReducedModel(ops_, std::move(nl));
}

Vector ReducedModel::SampledState(const Vector &x) const
{
  return ops_.sample_rows * x + ops_.sample_ref;
}

Vector ReducedModel::Rhs(const Vector &x) const
{
  detail::CheckDim(x.size(), r(), "reduced rhs coefficients");
  const Vector sampled = SampledState(x);
  Vector gvals(sampled.size());
  for (Index i = 0; i < sampled.size(); i++)
  {
    gvals(i) = nl_.g(sampled(i));
  }
  if (ops_.variant.kind() == RomKind::GRom)
  {
    return ops_.galerkin_lin * x + ops_.galerkin_offset + ops_.galerkin_nl * gvals;
  }
  Vector grad = ops_.q_r * x + ops_.q_offset;
  grad.noalias() += ops_.sample_rows.transpose() * ops_.sample_weights.cwiseProduct(gvals);
  return ops_.d_r * grad;
}

double ReducedModel::Hamiltonian(const Vector &x) const
{
  detail::CheckDim(x.size(), r(), "reduced Hamiltonian coefficients");
  const Vector sampled = SampledState(x);
  double nonlinear = 0.0;
  for (Index i = 0; i < sampled.size(); i++)
  {
    nonlinear += ops_.sample_weights(i) * nl_.G(sampled(i));
  }
  return 0.5 * x.dot(ops_.q_r * x) + x.dot(ops_.q_offset) + ops_.h_ref + nonlinear +
         ops_.h_const;
}

Vector ReducedModel::InitialCoefficients(const Vector &z0) const
{
  detail::CheckDim(z0.size(), full_dim(), "initial state");
  if (ops_.variant.shifted())
  {
    return Vector::Zero(r());
  }
  return ops_.phi.transpose() * z0;
}

Vector ReducedModel::Reconstruct(const Vector &x) const
{
  detail::CheckDim(x.size(), r(), "reduced coefficients");
  return ops_.phi * x + ops_.z_ref;
}

ReducedModel BuildRom(const RomVariant &variant, const PodBasis &u_basis,
                      const PodBasis &v_basis, const HamiltonianSystem &fom,
                      const DeimModel *deim)
{
  const Index n_u = u_basis.n();
  const Index full = fom.dim();
  detail::CheckDim(n_u + v_basis.n(), full, "BuildRom stacked basis rows");
  if (u_basis.shifted() != variant.shifted() || v_basis.shifted() != variant.shifted())
  {
    throw ConfigError("BuildRom: variant " + variant.Name() +
                      (variant.shifted() ? " needs bases from shifted snapshots"
                                         : " needs bases from unshifted snapshots"));
  }
  const bool is_deim = variant.kind() == RomKind::SpDeim;
  if (is_deim != (deim != nullptr))
  {
    throw ConfigError(is_deim ? "BuildRom: " + variant.Name() + " requires a DEIM model"
                              : "BuildRom: " + variant.Name() + " takes no DEIM model");
  }

  ReducedOperators ops;
  ops.variant = variant;
  ops.nonlinearity = fom.h().nonlinearity().name;
  ops.full_dim = full;
  ops.n_u = n_u;
  ops.r_u = u_basis.r();
  ops.r_v = v_basis.r();
  const Index r = ops.r();

  ops.phi = Matrix::Zero(full, r);
  ops.phi.topLeftCorner(n_u, ops.r_u) = u_basis.phi;
  ops.phi.bottomRightCorner(full - n_u, ops.r_v) = v_basis.phi;
  ops.z_ref = Vector::Zero(full);
  if (variant.shifted())
  {
    ops.z_ref.head(n_u) = *u_basis.shift_ref;
    ops.z_ref.tail(full - n_u) = *v_basis.shift_ref;
  }

  const Matrix &d = fom.d().matrix();
  const Matrix &q = fom.h().q();
  const Matrix q_phi = q * ops.phi;
  const Vector q_zref = q * ops.z_ref;

  ops.d_r = ops.phi.transpose() * (d * ops.phi);
  const double scale = std::max(1.0, ops.d_r.cwiseAbs().maxCoeff());
  if (!CheckSkew(ops.d_r, SKEW_TOL * scale))
  {
    throw NumericalError("BuildRom: reduced coupling matrix is not skew-symmetric");
  }
  ops.d_r = 0.5 * (ops.d_r - ops.d_r.transpose()).eval();
  ops.q_r = ops.phi.transpose() * q_phi;
  ops.q_r = 0.5 * (ops.q_r + ops.q_r.transpose()).eval();
  ops.q_offset = ops.phi.transpose() * q_zref;
  ops.h_ref = 0.5 * ops.z_ref.dot(q_zref);

  const auto &support = fom.h().support();
  const Vector &c = fom.h().c();
  const Vector c_support = EntriesOf(c, support);
  const auto &nl = fom.h().nonlinearity();

  if (is_deim)
  {
    detail::CheckDim(deim->n(), static_cast<Index>(support.size()),
                     "BuildRom DEIM basis rows vs nonlinear support");
    if (deim->shift_ref().has_value() != variant.shifted())
    {
      throw ConfigError("BuildRom: " + variant.Name() +
                        (variant.shifted() ? " needs a DEIM basis from shifted snapshots"
                                           : " needs a DEIM basis from unshifted snapshots"));
    }
    for (Index j : deim->indices())
    {
      ops.sample_index.push_back(support[static_cast<std::size_t>(j)]);
    }
    ops.sample_weights = deim->Weights(c_support);
    ops.deim_s = deim->s();
    ops.deim_condition = deim->condition();
    if (variant.shifted())
    {
      Vector g_ref(static_cast<Index>(support.size()));
      for (std::size_t i = 0; i < support.size(); i++)
      {
        g_ref(static_cast<Index>(i)) = nl.G(ops.z_ref(support[i]));
      }
      const double mismatch = (g_ref - *deim->shift_ref()).lpNorm<Eigen::Infinity>();
      if (mismatch > SHIFT_MATCH_TOL * std::max(1.0, g_ref.lpNorm<Eigen::Infinity>()))
      {
        throw ConfigError("BuildRom: DEIM shift reference is not G(u0) of the state bases");
      }
      // c^T (I - P) G(u0), evaluated once over the full support.
      ops.h_const = c_support.dot(g_ref) -
                    ops.sample_weights.dot(EntriesOf(g_ref, deim->indices()));
    }
  }
  else
  {
    ops.sample_index = support;
    ops.sample_weights = c_support;
  }
  ops.sample_rows = RowsOf(ops.phi, ops.sample_index);
  ops.sample_ref = EntriesOf(ops.z_ref, ops.sample_index);

  if (variant.kind() == RomKind::GRom)
  {
    const Matrix phi_t_d = ops.phi.transpose() * d;
    ops.galerkin_lin = phi_t_d * q_phi;
    ops.galerkin_offset = phi_t_d * q_zref;
    ops.galerkin_nl.resize(r, static_cast<Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); i++)
    {
      ops.galerkin_nl.col(static_cast<Index>(i)) = phi_t_d.col(support[i]) * c(support[i]);
    }
  }

  return ReducedModel(std::move(ops), nl);
}

void PersistRom(const ReducedModel &model, const std::filesystem::path &path)
{
  const auto &ops = model.ops();
  io::BinaryWriter w(path);
  w.Magic(ROM_MAGIC);
  w.Scalar<std::uint32_t>(ROM_VERSION);
  w.Scalar<std::uint32_t>(static_cast<std::uint32_t>(ops.variant.kind()));
  w.Scalar<std::uint8_t>(ops.variant.shifted() ? 1 : 0);
  w.String(ops.nonlinearity);
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(ops.full_dim));
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(ops.n_u));
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(ops.r_u));
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(ops.r_v));
  w.Mat(ops.phi);
  w.Vec(ops.z_ref);
  w.Mat(ops.d_r);
  w.Mat(ops.q_r);
  w.Vec(ops.q_offset);
  w.Scalar<double>(ops.h_ref);
  const bool galerkin = ops.variant.kind() == RomKind::GRom;
  if (galerkin)
  {
    w.Mat(ops.galerkin_lin);
    w.Vec(ops.galerkin_offset);
  }
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(ops.sample_index.size()));
  for (Index i : ops.sample_index)
  {
    w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(i));
  }
  if (galerkin)
  {
    w.Mat(ops.galerkin_nl);
  }
  w.Mat(ops.sample_rows);
  w.Vec(ops.sample_ref);
  w.Vec(ops.sample_weights);
  w.Scalar<double>(ops.h_const);
  w.Scalar<std::uint64_t>(static_cast<std::uint64_t>(ops.deim_s));
  w.Scalar<double>(ops.deim_condition);
  w.Close();
}

ReducedModel LoadRom(const std::filesystem::path &path)
{
  io::BinaryReader rd(path);
  rd.ExpectMagic(ROM_MAGIC);
  const auto version = rd.Scalar<std::uint32_t>("version");
  if (version != ROM_VERSION)
  {
    throw FormatError(path.string() + ": unsupported ROM artifact version " +
                      std::to_string(version));
  }
  const auto kind = rd.Scalar<std::uint32_t>("variant");
  const auto shifted = rd.Scalar<std::uint8_t>("variant");
  if (kind > static_cast<std::uint32_t>(RomKind::SpDeim) || shifted > 1 ||
      (kind == static_cast<std::uint32_t>(RomKind::GRom) && shifted))
  {
    throw FormatError(path.string() + ": invalid variant tag");
  }

  ReducedOperators ops;
  ops.variant = RomVariant(static_cast<RomKind>(kind), shifted != 0);
  ops.nonlinearity = rd.String("nonlinearity");
  const auto full = rd.Scalar<std::uint64_t>("dimensions");
  const auto n_u = rd.Scalar<std::uint64_t>("dimensions");
  const auto r_u = rd.Scalar<std::uint64_t>("dimensions");
  const auto r_v = rd.Scalar<std::uint64_t>("dimensions");
  if (n_u > full || r_u > n_u || r_v > full - n_u)
  {
    throw FormatError(path.string() + ": inconsistent dimensions");
  }
  ops.full_dim = static_cast<Index>(full);
  ops.n_u = static_cast<Index>(n_u);
  ops.r_u = static_cast<Index>(r_u);
  ops.r_v = static_cast<Index>(r_v);
  const auto r = r_u + r_v;

  ops.phi = rd.Mat(full, r, "phi");
  ops.z_ref = rd.Vec(full, "z_ref");
  ops.d_r = rd.Mat(r, r, "d_r");
  ops.q_r = rd.Mat(r, r, "q_r");
  ops.q_offset = rd.Vec(r, "q_offset");
  ops.h_ref = rd.Scalar<double>("h_ref");
  const bool galerkin = ops.variant.kind() == RomKind::GRom;
  if (galerkin)
  {
    ops.galerkin_lin = rd.Mat(r, r, "galerkin_lin");
    ops.galerkin_offset = rd.Vec(r, "galerkin_offset");
  }
  const auto m = rd.Scalar<std::uint64_t>("sample_index");
  rd.CheckRemaining(m, sizeof(std::uint64_t), "sample_index");
  ops.sample_index.resize(m);
  for (auto &i : ops.sample_index)
  {
    const auto idx = rd.Scalar<std::uint64_t>("sample_index");
    if (idx >= full)
    {
      throw FormatError(path.string() + ": sample index out of range");
    }
    i = static_cast<Index>(idx);
  }
  if (galerkin)
  {
    ops.galerkin_nl = rd.Mat(r, m, "galerkin_nl");
  }
  ops.sample_rows = rd.Mat(m, r, "sample_rows");
  ops.sample_ref = rd.Vec(m, "sample_ref");
  ops.sample_weights = rd.Vec(m, "sample_weights");
  ops.h_const = rd.Scalar<double>("h_const");
  ops.deim_s = static_cast<Index>(rd.Scalar<std::uint64_t>("deim"));
  ops.deim_condition = rd.Scalar<double>("deim");
  if (!rd.AtEnd())
  {
    throw FormatError(path.string() + ": trailing bytes after ROM payload");
  }
  Nonlinearity nl = NonlinearityByName(ops.nonlinearity);
  return ReducedModel(std::move(ops), std::move(nl));
}

}  // namespace hamrom
