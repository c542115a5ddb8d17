#pragma once

#include "mixmg/mesh.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace mixmg::detail {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Clockwise quarter turn (a, b) -> (b, -a). Maps gradients to scalar curls
/// and tangents of counterclockwise boundaries to outward normals.
inline Vec2 rotate_cw(Vec2 a) { return {a.y, -a.x}; }

/// Area and barycentric gradients of one triangle.
struct TriangleGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad{};
};

inline TriangleGeometry triangle_geometry(const MeshLevel& mesh, Index t)
{
  const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
  std::array<Point, 3> p{};
  for (std::size_t k = 0; k < 3; ++k)
    p[k] = mesh.vertices[static_cast<std::size_t>(tri[k])];
  TriangleGeometry g;
  g.area = mesh.signed_area(t);
  if (!(g.area > 0.0))
    throw std::invalid_argument("degenerate or inverted triangle " + std::to_string(t));
  const double s = 1.0 / (2.0 * g.area);
  for (std::size_t k = 0; k < 3; ++k) {
    const Point& b = p[(k + 1) % 3];
    const Point& c = p[(k + 2) % 3];
    g.grad[k] = {(b.y - c.y) * s, (c.x - b.x) * s};
  }
  return g;
}

/// Local endpoints (tail, head) of local edge k in the global orientation.
inline std::array<int, 2> oriented_local_edge(const MeshLevel& mesh, Index t, int k)
{
  const int a = k;
  const int b = (k + 1) % 3;
  if (mesh.edge_sign[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] > 0)
    return {a, b};
  return {b, a};
}

}  // namespace mixmg::detail
