// Element geometry and Whitney basis evaluated from scratch, as an oracle
// for the assembled operators.
#pragma once

#include "mixmg/mesh.hpp"

#include <array>

namespace oracle {

using mixmg::Index;
using mixmg::MeshLevel;
using mixmg::Point;

struct Elem {
  std::array<Point, 3> x;
  double area;
  std::array<std::array<double, 2>, 3> grad;
};

inline Elem element(const MeshLevel& m, Index t)
{
  Elem e;
  for (int k = 0; k < 3; ++k)
    e.x[k] = m.vertices[static_cast<std::size_t>(m.triangles[static_cast<std::size_t>(t)][k])];
  const double det = (e.x[1].x - e.x[0].x) * (e.x[2].y - e.x[0].y)
                     - (e.x[2].x - e.x[0].x) * (e.x[1].y - e.x[0].y);
  e.area = 0.5 * det;
  for (int k = 0; k < 3; ++k) {
    const Point& b = e.x[(k + 1) % 3];
    const Point& c = e.x[(k + 2) % 3];
    e.grad[k] = {(b.y - c.y) / det, (c.x - b.x) / det};
  }
  return e;
}

// Whitney function of the global edge (vi, vj), vi < vj, on element t at
// barycentric point lam; zero if the edge is not in t.
inline std::array<double, 2> whitney(const MeshLevel& m, Index t, Index vi, Index vj,
                              const std::array<double, 3>& lam)
{
  const auto& tri = m.triangles[static_cast<std::size_t>(t)];
  int a = -1, b = -1;
  for (int k = 0; k < 3; ++k) {
    if (tri[k] == vi) a = k;
    if (tri[k] == vj) b = k;
  }
  if (a < 0 || b < 0)
    return {0.0, 0.0};
  const Elem e = element(m, t);
  return {lam[a] * e.grad[b][0] - lam[b] * e.grad[a][0],
          lam[a] * e.grad[b][1] - lam[b] * e.grad[a][1]};
}

inline double dot(const std::array<double, 2>& a, Point b)
{
  return a[0] * b.x + a[1] * b.y;
}

}  // namespace oracle
