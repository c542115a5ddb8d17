#include "mixmg/rotated.hpp"

#include "geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mixmg {

using detail::dot;
using detail::rotate_cw;
using detail::triangle_geometry;
using detail::Vec2;

namespace {

// Incidence values computed from geometry must be integers.
double snap_integer(double v)
{
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9)
    throw std::runtime_error("rotated complex: incidence value " + std::to_string(v)
                             + " is not an integer");
  return r;
}

// psi_{pq} = l_p curl(l_q) - l_q curl(l_p) evaluated at barycentric coordinates lam.
Vec2 flux_basis(const detail::TriangleGeometry& g, int p, int q, const std::array<double, 3>& lam)
{
  const Vec2 cp = rotate_cw(g.grad[static_cast<std::size_t>(p)]);
  const Vec2 cq = rotate_cw(g.grad[static_cast<std::size_t>(q)]);
  const double lp = lam[static_cast<std::size_t>(p)];
  const double lq = lam[static_cast<std::size_t>(q)];
  return {lp * cq.x - lq * cp.x, lp * cq.y - lq * cp.y};
}

std::array<double, 3> barycentric(const MeshLevel& mesh, Index t, const detail::TriangleGeometry& g,
                                  Vec2 x)
{
  const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
  std::array<double, 3> lam{};
  for (std::size_t k = 0; k < 3; ++k) {
    const Point& b = mesh.vertices[static_cast<std::size_t>(tri[(k + 1) % 3])];
    lam[k] = dot(g.grad[k], {x.x - b.x, x.y - b.y});
  }
  return lam;
}

}  // namespace

SpMat assemble_flux_mass(const MeshLevel& mesh)
{
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(9 * mesh.num_triangles()));
  for (Index f = 0; f < mesh.num_triangles(); ++f) {
    const auto g = triangle_geometry(mesh, f);
    std::array<std::array<Vec2, 3>, 3> psi{};  // psi[k][m]: basis k at midpoint m
    for (int m = 0; m < 3; ++m) {
      std::array<double, 3> lam{0.0, 0.0, 0.0};
      lam[static_cast<std::size_t>(m)] = 0.5;
      lam[static_cast<std::size_t>((m + 1) % 3)] = 0.5;
      for (int k = 0; k < 3; ++k) {
        const auto [p, q] = detail::oriented_local_edge(mesh, f, k);
        psi[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] = flux_basis(g, p, q, lam);
      }
    }
    double local[3][3];
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t l = k; l < 3; ++l) {
        double s = 0.0;
        for (std::size_t m = 0; m < 3; ++m)
          s += dot(psi[k][m], psi[l][m]);
        local[k][l] = g.area / 3.0 * s;
        local[l][k] = local[k][l];
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

RotatedLevel assemble_rotated(const MeshLevel& mesh, const DeRhamLevel& level)
{
  const auto& edofs = level.edge_dofs;
  const auto& vdofs = level.vertex_dofs;

  std::vector<Triplet> rt;
  for (Index i = 0; i < edofs.size(); ++i) {
    const Index e = edofs.to_full[static_cast<std::size_t>(i)];
    const auto& ev = mesh.edges[static_cast<std::size_t>(e)];
    const Point& x0 = mesh.vertices[static_cast<std::size_t>(ev[0])];
    const Point& x1 = mesh.vertices[static_cast<std::size_t>(ev[1])];
    const Vec2 normal = rotate_cw({x1.x - x0.x, x1.y - x0.y});
    const Index t = mesh.edge_triangles[static_cast<std::size_t>(e)][0];
    const auto g = triangle_geometry(mesh, t);
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    for (std::size_t k = 0; k < 3; ++k) {
      const Index vi = vdofs.to_interior[static_cast<std::size_t>(tri[k])];
      if (vi < 0)
        continue;
      const double flux = snap_integer(dot(rotate_cw(g.grad[k]), normal));
      if (flux != 0.0)
        rt.emplace_back(static_cast<int>(i), static_cast<int>(vi), flux);
    }
  }

  std::vector<Triplet> dt;
  Vec Mt(mesh.num_triangles());
  for (Index f = 0; f < mesh.num_triangles(); ++f) {
    const auto g = triangle_geometry(mesh, f);
    Mt[f] = 1.0 / g.area;
    for (int k = 0; k < 3; ++k) {
      const Index ei = edofs.to_interior[static_cast<std::size_t>(
          mesh.triangle_edges[static_cast<std::size_t>(f)][static_cast<std::size_t>(k)])];
      if (ei < 0)
        continue;
      const auto [p, q] = detail::oriented_local_edge(mesh, f, k);
      const Vec2 cp = rotate_cw(g.grad[static_cast<std::size_t>(p)]);
      const Vec2 cq = rotate_cw(g.grad[static_cast<std::size_t>(q)]);
      const double d = snap_integer(
          g.area * (dot(g.grad[static_cast<std::size_t>(p)], cq)
                    - dot(g.grad[static_cast<std::size_t>(q)], cp)));
      dt.emplace_back(static_cast<int>(f), static_cast<int>(ei), d);
    }
  }

  RotatedLevel R;
  R.rot = SpMat(edofs.size(), vdofs.size());
  R.rot.setFromTriplets(rt.begin(), rt.end());
  R.div = SpMat(mesh.num_triangles(), edofs.size());
  R.div.setFromTriplets(dt.begin(), dt.end());
  R.mass_flux = restrict_interior(assemble_flux_mass(mesh), edofs, edofs);
  R.Mt = Mt;
  R.Mv_lumped = level.Mv_lumped;
  R.coupling = SpMat(R.rot.transpose() * R.mass_flux);
  R.div_stiffness = weighted_gram(R.div, R.Mt);
  return R;
}

SpMat schur_rotated(const RotatedLevel& level)
{
  return SpMat(weighted_gram(level.coupling, level.Mv_lumped.cwiseInverse()) + level.div_stiffness);
}

Vec flux_load_vector(const MeshLevel& mesh, Point field)
{
  Vec f = Vec::Zero(mesh.num_edges());
  const Vec2 F{field.x, field.y};
  const std::array<double, 3> centroid{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = triangle_geometry(mesh, t);
    for (int k = 0; k < 3; ++k) {
      const auto [p, q] = detail::oriented_local_edge(mesh, t, k);
      f[mesh.triangle_edges[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]] +=
          g.area * dot(flux_basis(g, p, q, centroid), F);
    }
  }
  return f;
}

SpMat flux_prolongation(const MeshLevel& coarse, const MeshLevel& fine)
{
  if (!fine.parent || fine.parent->coarse_vertices != coarse.num_vertices()
      || fine.parent->coarse_edges != coarse.num_edges()
      || fine.parent->coarse_triangles != coarse.num_triangles())
    throw std::invalid_argument("flux_prolongation: levels are not a parent/child pair");

  const double gp = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> nodes{0.5 - gp, 0.5 + gp};

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(3 * fine.num_edges()));
  for (Index e = 0; e < fine.num_edges(); ++e) {
    const auto& ev = fine.edges[static_cast<std::size_t>(e)];
    const Point& P = fine.vertices[static_cast<std::size_t>(ev[0])];
    const Point& Q = fine.vertices[static_cast<std::size_t>(ev[1])];
    const Vec2 normal = rotate_cw({Q.x - P.x, Q.y - P.y});
    const Index T = fine.edge_triangles[static_cast<std::size_t>(e)][0] / 4;
    const auto g = triangle_geometry(coarse, T);
    double scale = 0.0;
    std::array<double, 3> value{};
    for (int k = 0; k < 3; ++k) {
      const auto [p, q] = detail::oriented_local_edge(coarse, T, k);
      double s = 0.0;
      for (double node : nodes) {
        const Vec2 x{P.x + node * (Q.x - P.x), P.y + node * (Q.y - P.y)};
        s += 0.5 * dot(flux_basis(g, p, q, barycentric(coarse, T, g, x)), normal);
      }
      value[static_cast<std::size_t>(k)] = s;
      scale = std::max(scale, std::abs(s));
    }
    for (std::size_t k = 0; k < 3; ++k)
      if (std::abs(value[k]) > 1e-12 * scale)
        t.emplace_back(static_cast<int>(e),
                       static_cast<int>(coarse.triangle_edges[static_cast<std::size_t>(T)][k]),
                       value[k]);
  }
  SpMat P(fine.num_edges(), coarse.num_edges());
  P.setFromTriplets(t.begin(), t.end());
  return P;
}

}  // namespace mixmg
