#include "mixmg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace mixmg {

Domain parse_domain(std::string_view name)
{
  if (name == "square")
    return Domain::square;
  if (name == "lshape")
    return Domain::lshape;
  if (name == "crack")
    return Domain::crack;
  throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
}

std::string_view to_string(Domain d)
{
  switch (d) {
  case Domain::square:
    return "square";
  case Domain::lshape:
    return "lshape";
  case Domain::crack:
    return "crack";
  }
  return "?";
}

double MeshLevel::signed_area(Index t) const
{
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  const Point& a = vertices[static_cast<std::size_t>(tri[0])];
  const Point& b = vertices[static_cast<std::size_t>(tri[1])];
  const Point& c = vertices[static_cast<std::size_t>(tri[2])];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Index MeshLevel::find_edge(Index a, Index b) const
{
  const std::array<Index, 2> key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key)
    return -1;
  return static_cast<Index>(it - edges.begin());
}

void finalize_topology(MeshLevel& mesh)
{
  const Index nt = mesh.num_triangles();
  for (Index t = 0; t < nt; ++t)
    if (!(mesh.signed_area(t) > 0.0))
      throw std::invalid_argument("finalize_topology: triangle " + std::to_string(t)
                                  + " is not counterclockwise");

  mesh.edges.clear();
  mesh.edges.reserve(static_cast<std::size_t>(3 * nt));
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const Index a = tri[static_cast<std::size_t>(k)];
      const Index b = tri[static_cast<std::size_t>((k + 1) % 3)];
      mesh.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(mesh.edges.begin(), mesh.edges.end());
  mesh.edges.erase(std::unique(mesh.edges.begin(), mesh.edges.end()), mesh.edges.end());

  const std::size_t ne = mesh.edges.size();
  mesh.triangle_edges.assign(static_cast<std::size_t>(nt), {});
  mesh.edge_sign.assign(static_cast<std::size_t>(nt), {});
  mesh.edge_triangles.assign(ne, {-1, -1});
  for (Index t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      const Index a = tri[static_cast<std::size_t>(k)];
      const Index b = tri[static_cast<std::size_t>((k + 1) % 3)];
      const Index e = mesh.find_edge(a, b);
      mesh.triangle_edges[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = e;
      mesh.edge_sign[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = a < b ? 1 : -1;
      auto& adj = mesh.edge_triangles[static_cast<std::size_t>(e)];
      if (adj[0] < 0)
        adj[0] = t;
      else if (adj[1] < 0)
        adj[1] = t;
      else
        throw std::invalid_argument("finalize_topology: edge shared by more than two triangles");
    }
  }

  mesh.boundary_edge.assign(ne, 0);
  mesh.boundary_vertex.assign(mesh.vertices.size(), 0);
  for (std::size_t e = 0; e < ne; ++e) {
    if (mesh.edge_triangles[e][1] < 0) {
      mesh.boundary_edge[e] = 1;
      mesh.boundary_vertex[static_cast<std::size_t>(mesh.edges[e][0])] = 1;
      mesh.boundary_vertex[static_cast<std::size_t>(mesh.edges[e][1])] = 1;
    }
  }
}

namespace {

using LatticePoint = std::pair<int, int>;  // (i, j)
using LatticeTriangle = std::array<LatticePoint, 3>;

// Lattice triangles -> mesh; vertices numbered in (j, i) raster order.
MeshLevel from_lattice(Domain domain, const std::vector<LatticeTriangle>& tris, double spacing,
                       Point origin)
{
  std::map<std::pair<int, int>, Index> ids;  // keyed by (j, i)
  for (const auto& t : tris)
    for (const auto& [i, j] : t)
      ids.emplace(std::make_pair(j, i), 0);

  MeshLevel mesh;
  mesh.domain = domain;
  mesh.h = 0.5;
  Index next = 0;
  for (auto& [key, id] : ids) {
    id = next++;
    mesh.vertices.push_back(
        {origin.x + spacing * key.second, origin.y + spacing * key.first});
  }
  for (const auto& t : tris) {
    std::array<Index, 3> tri{};
    for (std::size_t k = 0; k < 3; ++k)
      tri[k] = ids.at({t[k].second, t[k].first});
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

// Two triangles per cell with lower-left corner (i, j).
void split_cell(std::vector<LatticeTriangle>& out, int i, int j, bool main_diagonal)
{
  const LatticePoint c00{i, j}, c10{i + 1, j}, c01{i, j + 1}, c11{i + 1, j + 1};
  if (main_diagonal) {
    out.push_back({c00, c10, c11});
    out.push_back({c00, c11, c01});
  } else {
    out.push_back({c00, c10, c01});
    out.push_back({c10, c11, c01});
  }
}

MeshLevel coarse_square()
{
  std::vector<LatticeTriangle> tris;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      split_cell(tris, i, j, true);
  return from_lattice(Domain::square, tris, 0.5, {0.0, 0.0});
}

MeshLevel coarse_lshape()
{
  std::vector<LatticeTriangle> tris;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      if (!(i == 1 && j == 0))
        split_cell(tris, i, j, true);
  return from_lattice(Domain::lshape, tris, 1.0, {-1.0, -1.0});
}

// Diamond |i| + |j| <= 2 on the half-spacing lattice. Interior cells are split
// along the diagonal parallel to the nearest boundary side; boundary cells keep
// the triangle of their three inside corners. The slit points (1,0) and (2,0)
// are duplicated for triangles below the slit.
MeshLevel coarse_crack()
{
  auto inside = [](LatticePoint p) { return std::abs(p.first) + std::abs(p.second) <= 2; };
  std::vector<LatticeTriangle> tris;
  for (int j = -2; j < 2; ++j)
    for (int i = -2; i < 2; ++i) {
      const std::array<LatticePoint, 4> ring{
          LatticePoint{i, j}, LatticePoint{i + 1, j}, LatticePoint{i + 1, j + 1},
          LatticePoint{i, j + 1}};
      int count = 0;
      for (const auto& p : ring)
        count += inside(p) ? 1 : 0;
      if (count == 4) {
        const bool same_sign = (i >= 0) == (j >= 0);
        split_cell(tris, i, j, !same_sign);
      } else if (count == 3) {
        LatticeTriangle t{};
        std::size_t k = 0;
        for (const auto& p : ring)
          if (inside(p))
            t[k++] = p;
        tris.push_back(t);
      }
    }

  MeshLevel mesh = from_lattice(Domain::crack, tris, 0.5, {0.0, 0.0});

  // Slit duplication.
  std::map<Index, Index> duplicate;
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Point p = mesh.vertices[static_cast<std::size_t>(v)];
    if (p.y == 0.0 && p.x > 0.0)
      duplicate[v] = -1;
  }
  for (auto& [v, copy] : duplicate) {
    copy = mesh.num_vertices();
    mesh.vertices.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
  }
  for (auto& tri : mesh.triangles) {
    double cy = 0.0;
    for (Index v : tri)
      cy += mesh.vertices[static_cast<std::size_t>(v)].y;
    if (cy < 0.0)
      for (Index& v : tri)
        if (auto it = duplicate.find(v); it != duplicate.end())
          v = it->second;
  }
  return mesh;
}

}  // namespace

MeshLevel build_coarse(Domain domain)
{
  MeshLevel mesh;
  switch (domain) {
  case Domain::square:
    mesh = coarse_square();
    break;
  case Domain::lshape:
    mesh = coarse_lshape();
    break;
  case Domain::crack:
    mesh = coarse_crack();
    break;
  }
  finalize_topology(mesh);
  return mesh;
}

MeshLevel refine(const MeshLevel& coarse)
{
  MeshLevel fine;
  fine.domain = coarse.domain;
  fine.h = 0.5 * coarse.h;

  const Index nv = coarse.num_vertices();
  fine.vertices = coarse.vertices;
  fine.vertices.reserve(static_cast<std::size_t>(nv + coarse.num_edges()));
  for (const auto& e : coarse.edges) {
    const Point& a = coarse.vertices[static_cast<std::size_t>(e[0])];
    const Point& b = coarse.vertices[static_cast<std::size_t>(e[1])];
    fine.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }

  fine.triangles.reserve(static_cast<std::size_t>(4 * coarse.num_triangles()));
  for (Index t = 0; t < coarse.num_triangles(); ++t) {
    const auto& v = coarse.triangles[static_cast<std::size_t>(t)];
    const auto& e = coarse.triangle_edges[static_cast<std::size_t>(t)];
    const Index mab = nv + e[0];
    const Index mbc = nv + e[1];
    const Index mca = nv + e[2];
    fine.triangles.push_back({v[0], mab, mca});
    fine.triangles.push_back({mab, v[1], mbc});
    fine.triangles.push_back({mca, mbc, v[2]});
    fine.triangles.push_back({mab, mbc, mca});
  }
  finalize_topology(fine);

  RefinementLink link;
  link.coarse_vertices = nv;
  link.coarse_edges = coarse.num_edges();
  link.coarse_triangles = coarse.num_triangles();
  link.child_edges.reserve(coarse.edges.size());
  for (Index e = 0; e < coarse.num_edges(); ++e) {
    const auto& ce = coarse.edges[static_cast<std::size_t>(e)];
    link.child_edges.push_back({fine.find_edge(ce[0], nv + e), fine.find_edge(nv + e, ce[1])});
  }
  fine.parent = std::move(link);
  return fine;
}

MeshHierarchy build_hierarchy(Domain domain, int levels)
{
  if (levels < 1)
    throw std::invalid_argument("build_hierarchy: need at least one level");
  MeshHierarchy H;
  H.levels.reserve(static_cast<std::size_t>(levels));
  H.levels.push_back(build_coarse(domain));
  for (int k = 2; k <= levels; ++k)
    H.levels.push_back(refine(H.levels.back()));
  return H;
}

void write_mesh(std::ostream& out, const MeshLevel& mesh)
{
  const auto old = out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_edges() << ' ' << mesh.num_triangles() << ' '
      << mesh.h << '\n';
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    out << mesh.vertices[v].x << ' ' << mesh.vertices[v].y << ' '
        << int(mesh.boundary_vertex[v]) << '\n';
  for (std::size_t e = 0; e < mesh.edges.size(); ++e)
    out << mesh.edges[e][0] << ' ' << mesh.edges[e][1] << ' ' << int(mesh.boundary_edge[e])
        << '\n';
  for (const auto& t : mesh.triangles)
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(old);
}

}  // namespace mixmg
