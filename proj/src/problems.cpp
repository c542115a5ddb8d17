#include "mixmg/problems.hpp"

#include "mixmg/multigrid.hpp"

#include <stdexcept>
#include <string>

namespace mixmg {

ProblemKind parse_problem(std::string_view name)
{
  if (name == "curl" || name == "curl_vlap")
    return ProblemKind::curl_vlap;
  if (name == "div" || name == "div_vlap")
    return ProblemKind::div_vlap;
  if (name == "maxwell")
    return ProblemKind::maxwell;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::string_view to_string(ProblemKind kind)
{
  switch (kind) {
  case ProblemKind::curl_vlap: return "curl";
  case ProblemKind::div_vlap: return "div";
  case ProblemKind::maxwell: return "maxwell";
  }
  return "?";
}

Vec interior_load(const MeshLevel& mesh, const DeRhamLevel& level)
{
  return restrict_interior(load_vector(mesh, kLoadField), level.edge_dofs);
}

namespace {

SaddleSystem make_system(ProblemKind kind, const MeshLevel& mesh, const DeRhamLevel& level,
                         SpMat matrix, const Vec& first, const Vec& second)
{
  SaddleSystem s;
  s.kind = kind;
  s.matrix = std::move(matrix);
  s.matrix.makeCompressed();
  s.first_size = first.size();
  s.second_size = second.size();
  s.rhs.resize(s.size());
  s.rhs << first, second;
  s.full_dofs = level.full_dofs();
  s.h = mesh.h;
  return s;
}

}  // namespace

SaddleSystem build_curl_saddle(const MeshLevel& mesh, const DeRhamLevel& level)
{
  SpMat M = diagonal_matrix(-level.Mv_lumped);
  SpMat Bt = level.B.transpose();
  return make_system(ProblemKind::curl_vlap, mesh, level,
                     block_matrix(M, level.B, Bt, level.curl_stiffness),
                     Vec::Zero(level.B.rows()), interior_load(mesh, level));
}

SaddleSystem build_div_saddle(const MeshLevel& mesh, const DeRhamLevel& level,
                              const RotatedLevel& rotated)
{
  const Point turned{kLoadField.y, -kLoadField.x};
  SpMat M = diagonal_matrix(-rotated.Mv_lumped);
  SpMat Ct = rotated.coupling.transpose();
  return make_system(ProblemKind::div_vlap, mesh, level,
                     block_matrix(M, rotated.coupling, Ct, rotated.div_stiffness),
                     Vec::Zero(rotated.coupling.rows()),
                     restrict_interior(flux_load_vector(mesh, turned), level.edge_dofs));
}

SaddleSystem build_maxwell(const MeshLevel& mesh, const DeRhamLevel& level)
{
  const SchurOperator A = schur_lumped(level);
  SpMat Bt = level.B.transpose();
  SpMat zero(level.B.rows(), level.B.rows());
  return make_system(ProblemKind::maxwell, mesh, level, block_matrix(A.matrix(), Bt, level.B, zero),
                     interior_load(mesh, level), Vec::Zero(level.B.rows()));
}

SaddleSystem build_maxwell_unaugmented(const MeshLevel& mesh, const DeRhamLevel& level)
{
  SpMat Bt = level.B.transpose();
  SpMat zero(level.B.rows(), level.B.rows());
  return make_system(ProblemKind::maxwell, mesh, level,
                     block_matrix(level.curl_stiffness, Bt, level.B, zero),
                     interior_load(mesh, level), Vec::Zero(level.B.rows()));
}

Discretization build_discretization(Domain domain, int levels, bool with_rotated)
{
  Discretization d;
  d.meshes = build_hierarchy(domain, levels);
  d.complexes.reserve(static_cast<std::size_t>(levels));
  for (int k = 1; k <= levels; ++k)
    d.complexes.push_back(assemble_de_rham(d.meshes.level(k)));
  if (with_rotated)
    for (int k = 1; k <= levels; ++k)
      d.rotated.push_back(assemble_rotated(d.meshes.level(k), d.complex(k)));

  d.vertex_prolongation.resize(static_cast<std::size_t>(levels));
  d.edge_prolongation.resize(static_cast<std::size_t>(levels));
  if (with_rotated)
    d.flux_prolongation.resize(static_cast<std::size_t>(levels));
  for (int k = 2; k <= levels; ++k) {
    const MeshLevel& coarse = d.mesh(k - 1);
    const MeshLevel& fine = d.mesh(k);
    const DeRhamLevel& cc = d.complex(k - 1);
    const DeRhamLevel& fc = d.complex(k);
    const auto i = static_cast<std::size_t>(k - 1);
    d.vertex_prolongation[i] = restrict_interior(
        prolongation(TransferSpace::vertex, coarse, fine), fc.vertex_dofs, cc.vertex_dofs);
    d.edge_prolongation[i] = restrict_interior(
        prolongation(TransferSpace::edge, coarse, fine), fc.edge_dofs, cc.edge_dofs);
    if (with_rotated)
      d.flux_prolongation[i] =
          restrict_interior(flux_prolongation(coarse, fine), fc.edge_dofs, cc.edge_dofs);
  }
  return d;
}

SaddleSystem build_system(ProblemKind kind, const Discretization& disc, int level)
{
  const MeshLevel& mesh = disc.mesh(level);
  const DeRhamLevel& dr = disc.complex(level);
  switch (kind) {
  case ProblemKind::curl_vlap: return build_curl_saddle(mesh, dr);
  case ProblemKind::div_vlap:
    if (disc.rotated.empty())
      throw std::logic_error("build_system: discretization has no rotated complex");
    return build_div_saddle(mesh, dr, disc.rotated_level(level));
  case ProblemKind::maxwell: return build_maxwell(mesh, dr);
  }
  throw std::invalid_argument("build_system: unknown problem");
}

std::pair<Vec, Vec> split(const SaddleSystem& sys, const Vec& x)
{
  if (x.size() != sys.size())
    throw std::invalid_argument("split: dimension mismatch");
  return {x.head(sys.first_size), x.tail(sys.second_size)};
}

}  // namespace mixmg
