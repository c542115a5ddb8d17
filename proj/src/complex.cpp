#include "mixmg/complex.hpp"

#include "geometry.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>

namespace mixmg {

using detail::dot;
using detail::triangle_geometry;

InteriorIndex interior_index(std::span<const std::uint8_t> boundary_flags)
{
  InteriorIndex idx;
  idx.to_interior.assign(boundary_flags.size(), -1);
  for (std::size_t i = 0; i < boundary_flags.size(); ++i)
    if (!boundary_flags[i]) {
      idx.to_interior[i] = static_cast<Index>(idx.to_full.size());
      idx.to_full.push_back(static_cast<Index>(i));
    }
  return idx;
}

SpMat differential_matrix(const MeshLevel& mesh, Differential which)
{
  std::vector<Triplet> t;
  if (which == Differential::grad) {
    SpMat G(mesh.num_edges(), mesh.num_vertices());
    t.reserve(2 * mesh.edges.size());
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
      t.emplace_back(static_cast<int>(e), static_cast<int>(mesh.edges[e][0]), -1.0);
      t.emplace_back(static_cast<int>(e), static_cast<int>(mesh.edges[e][1]), 1.0);
    }
    G.setFromTriplets(t.begin(), t.end());
    return G;
  }
  SpMat C(mesh.num_triangles(), mesh.num_edges());
  t.reserve(3 * mesh.triangles.size());
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f)
    for (std::size_t k = 0; k < 3; ++k)
      t.emplace_back(static_cast<int>(f), static_cast<int>(mesh.triangle_edges[f][k]),
                     static_cast<double>(mesh.edge_sign[f][k]));
  C.setFromTriplets(t.begin(), t.end());
  return C;
}

SpMat assemble_mass(const MeshLevel& mesh, Space space)
{
  const Index nt = mesh.num_triangles();
  std::vector<Triplet> t;

  switch (space) {
  case Space::vertex: {
    t.reserve(static_cast<std::size_t>(9 * nt));
    for (Index f = 0; f < nt; ++f) {
      const auto g = triangle_geometry(mesh, f);
      const auto& tri = mesh.triangles[static_cast<std::size_t>(f)];
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          t.emplace_back(static_cast<int>(tri[a]), static_cast<int>(tri[b]),
                         g.area * (a == b ? 2.0 : 1.0) / 12.0);
    }
    SpMat M(mesh.num_vertices(), mesh.num_vertices());
    M.setFromTriplets(t.begin(), t.end());
    return M;
  }
  case Space::edge: {
    t.reserve(static_cast<std::size_t>(9 * nt));
    for (Index f = 0; f < nt; ++f) {
      const auto g = triangle_geometry(mesh, f);
      auto m = [&g](int a, int b) { return g.area * (a == b ? 2.0 : 1.0) / 12.0; };
      auto gg = [&g](int a, int b) {
        return dot(g.grad[static_cast<std::size_t>(a)], g.grad[static_cast<std::size_t>(b)]);
      };
      double local[3][3];
      for (int k = 0; k < 3; ++k) {
        const auto [p, q] = detail::oriented_local_edge(mesh, f, k);
        for (int l = k; l < 3; ++l) {
          const auto [r, s] = detail::oriented_local_edge(mesh, f, l);
          local[k][l] = m(p, r) * gg(q, s) - m(p, s) * gg(q, r) - m(q, r) * gg(p, s)
                        + m(q, s) * gg(p, r);
          local[l][k] = local[k][l];
        }
      }
      const auto& te = mesh.triangle_edges[static_cast<std::size_t>(f)];
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          t.emplace_back(static_cast<int>(te[k]), static_cast<int>(te[l]), local[k][l]);
    }
    SpMat M(mesh.num_edges(), mesh.num_edges());
    M.setFromTriplets(t.begin(), t.end());
    return M;
  }
  case Space::face: {
    Vec d(nt);
    for (Index f = 0; f < nt; ++f)
      d[f] = 1.0 / triangle_geometry(mesh, f).area;
    return diagonal_matrix(d);
  }
  }
  throw std::invalid_argument("assemble_mass: unknown space");
}

Vec lump_mass(const SpMat& M, Space space)
{
  Vec d(M.rows());
  for (Index r = 0; r < M.rows(); ++r) {
    double v = 0.0;
    for (SpMat::InnerIterator it(M, r); it; ++it)
      if (space == Space::vertex)
        v += it.value();
      else if (it.col() == r)
        v = it.value();
    if (!(v > 0.0))
      throw std::runtime_error("lump_mass: nonpositive lumped entry at row " + std::to_string(r));
    d[r] = v;
  }
  return d;
}

SpMat restrict_interior(const SpMat& A, const InteriorIndex& rows, const InteriorIndex& cols)
{
  return submatrix(A, rows.to_full, cols.to_full);
}

Vec restrict_interior(const Vec& v, const InteriorIndex& dofs)
{
  return subvector(v, dofs.to_full);
}

Vec extend_interior(const Vec& v, const InteriorIndex& dofs)
{
  Vec out = Vec::Zero(dofs.full_size());
  for (Index i = 0; i < dofs.size(); ++i)
    out[dofs.to_full[static_cast<std::size_t>(i)]] = v[i];
  return out;
}

Vec load_vector(const MeshLevel& mesh, Point field)
{
  // On T, the integral of phi_{pq} is |T|/3 (grad l_q - grad l_p).
  Vec f = Vec::Zero(mesh.num_edges());
  const detail::Vec2 F{field.x, field.y};
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = triangle_geometry(mesh, t);
    for (int k = 0; k < 3; ++k) {
      const auto [p, q] = detail::oriented_local_edge(mesh, t, k);
      const detail::Vec2 d{g.grad[static_cast<std::size_t>(q)].x - g.grad[static_cast<std::size_t>(p)].x,
                           g.grad[static_cast<std::size_t>(q)].y - g.grad[static_cast<std::size_t>(p)].y};
      f[mesh.triangle_edges[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]] +=
          g.area / 3.0 * dot(d, F);
    }
  }
  return f;
}

DeRhamLevel assemble_de_rham(const MeshLevel& mesh)
{
  DeRhamLevel L;
  L.grad = differential_matrix(mesh, Differential::grad);
  L.curl = differential_matrix(mesh, Differential::curl);
  L.mass_vertex = assemble_mass(mesh, Space::vertex);
  L.mass_edge = assemble_mass(mesh, Space::edge);
  L.mass_face = assemble_mass(mesh, Space::face);
  L.lumped_vertex = lump_mass(L.mass_vertex, Space::vertex);
  L.lumped_edge = lump_mass(L.mass_edge, Space::edge);
  L.vertex_dofs = interior_index(mesh.boundary_vertex);
  L.edge_dofs = interior_index(mesh.boundary_edge);

  InteriorIndex all_faces;
  all_faces.to_full.resize(static_cast<std::size_t>(mesh.num_triangles()));
  all_faces.to_interior.resize(static_cast<std::size_t>(mesh.num_triangles()));
  for (Index f = 0; f < mesh.num_triangles(); ++f) {
    all_faces.to_full[static_cast<std::size_t>(f)] = f;
    all_faces.to_interior[static_cast<std::size_t>(f)] = f;
  }

  L.G = restrict_interior(L.grad, L.edge_dofs, L.vertex_dofs);
  L.C = restrict_interior(L.curl, all_faces, L.edge_dofs);
  L.Mv = restrict_interior(L.mass_vertex, L.vertex_dofs, L.vertex_dofs);
  L.Me = restrict_interior(L.mass_edge, L.edge_dofs, L.edge_dofs);
  L.Mv_lumped = restrict_interior(L.lumped_vertex, L.vertex_dofs);
  L.Mf = L.mass_face.diagonal();
  L.B = SpMat(L.G.transpose() * L.Me);
  L.curl_stiffness = weighted_gram(L.C, L.Mf);
  return L;
}

struct SchurOperator::ExactData {
  SpMat B;
  SpMat K;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_solver;
};

SchurOperator SchurOperator::lumped(const DeRhamLevel& level)
{
  SchurOperator S;
  S.variant_ = Variant::lumped;
  S.size_ = level.edge_dofs.size();
  S.matrix_ = SpMat(weighted_gram(level.B, level.Mv_lumped.cwiseInverse()) + level.curl_stiffness);
  return S;
}

SchurOperator SchurOperator::exact(const DeRhamLevel& level)
{
  auto data = std::make_shared<ExactData>();
  data->B = level.B;
  data->K = level.curl_stiffness;
  if (level.Mv.rows() > 0)
    data->mass_solver.compute(Eigen::SparseMatrix<double>(level.Mv));
  if (level.Mv.rows() > 0 && data->mass_solver.info() != Eigen::Success)
    throw std::runtime_error("SchurOperator::exact: vertex mass factorization failed");
  SchurOperator S;
  S.variant_ = Variant::exact;
  S.size_ = level.edge_dofs.size();
  S.exact_ = std::move(data);
  return S;
}

void SchurOperator::apply(const Vec& u, Vec& out) const
{
  if (u.size() != size_)
    throw std::invalid_argument("SchurOperator::apply: dimension mismatch");
  if (variant_ == Variant::lumped) {
    out = matrix_ * u;
    return;
  }
  const Vec Bu = exact_->B * u;
  if (Bu.size() == 0) {
    out = exact_->K * u;
    return;
  }
  const Vec s = exact_->mass_solver.solve(Bu);
  out = exact_->B.transpose() * s;
  out += exact_->K * u;
}

Vec SchurOperator::operator*(const Vec& u) const
{
  Vec out;
  apply(u, out);
  return out;
}

const SpMat& SchurOperator::matrix() const
{
  if (variant_ != Variant::lumped)
    throw std::logic_error("SchurOperator::matrix: the exact variant has no sparse matrix");
  return matrix_;
}

DenseMat SchurOperator::dense() const
{
  if (variant_ == Variant::lumped)
    return DenseMat(matrix_);
  DenseMat A(size_, size_);
  Vec e = Vec::Zero(size_);
  Vec col;
  for (Index j = 0; j < size_; ++j) {
    e[j] = 1.0;
    apply(e, col);
    A.col(j) = col;
    e[j] = 0.0;
  }
  return 0.5 * (A + A.transpose());
}

SchurOperator schur_lumped(const DeRhamLevel& level)
{
  return SchurOperator::lumped(level);
}

Vec schur_exact_apply(const DeRhamLevel& level, const Vec& u)
{
  return SchurOperator::exact(level) * u;
}

}  // namespace mixmg
