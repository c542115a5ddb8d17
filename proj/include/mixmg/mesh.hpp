#pragma once

#include "mixmg/sparse.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixmg {

/// Benchmark domains.
///   square: (0,1)^2
///   lshape: (-1,1)^2 minus [0,1]x[-1,0]
///   crack:  {|x|+|y| < 1} minus the slit {0 <= x <= 1, y = 0}
enum class Domain { square, lshape, crack };

Domain parse_domain(std::string_view name);
std::string_view to_string(Domain d);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Links a refined level to the level it was refined from. Fine vertices
/// [0, coarse_vertices) are the coarse vertices; fine vertex coarse_vertices + e
/// is the midpoint of coarse edge e. Fine triangle t lies in coarse triangle t / 4.
struct RefinementLink {
  Index coarse_vertices = 0;
  Index coarse_edges = 0;
  Index coarse_triangles = 0;
  /// child_edges[e] = the two fine halves of coarse edge e (tail half first).
  std::vector<std::array<Index, 2>> child_edges;
};

/// One triangulation with fixed orientation conventions:
///  - triangles are counterclockwise;
///  - edge e = (v0, v1) with v0 < v1 is oriented v0 -> v1, and edges are
///    sorted lexicographically;
///  - local edge k of triangle (a, b, c) runs t[k] -> t[(k+1) % 3];
///    edge_sign[t][k] = +1 when that agrees with the global orientation.
struct MeshLevel {
  Domain domain = Domain::square;
  /// Nominal mesh size: 1/2 on the coarse template, halved per refinement.
  double h = 0.5;
  std::vector<Point> vertices;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<std::array<Index, 2>> edges;
  std::vector<std::uint8_t> boundary_vertex;
  std::vector<std::uint8_t> boundary_edge;
  std::vector<std::array<Index, 3>> triangle_edges;
  std::vector<std::array<int, 3>> edge_sign;
  /// Triangles adjacent to each edge; second entry is -1 on the boundary.
  std::vector<std::array<Index, 2>> edge_triangles;
  std::optional<RefinementLink> parent;

  Index num_vertices() const { return static_cast<Index>(vertices.size()); }
  Index num_edges() const { return static_cast<Index>(edges.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles.size()); }

  double signed_area(Index t) const;
  /// Edge index of (a, b) in either order, or -1.
  Index find_edge(Index a, Index b) const;
};

struct MeshHierarchy {
  /// levels[0] is the coarsest (level 1).
  std::vector<MeshLevel> levels;

  int num_levels() const { return static_cast<int>(levels.size()); }
  const MeshLevel& finest() const { return levels.back(); }
  const MeshLevel& level(int k) const { return levels.at(static_cast<std::size_t>(k - 1)); }
};

MeshLevel build_coarse(Domain domain);

/// Red refinement: each triangle is split into four through its edge midpoints.
MeshLevel refine(const MeshLevel& coarse);

/// Levels 1..J; level J has nominal h = 2^-J.
MeshHierarchy build_hierarchy(Domain domain, int levels);

/// Builds edges, signs, adjacency and boundary flags from vertices and
/// counterclockwise triangles. Exposed for tests that construct small meshes.
void finalize_topology(MeshLevel& mesh);

/// `V E F h`, then `x y bflag`, `v0 v1 bflag` and `v0 v1 v2` lines.
void write_mesh(std::ostream& out, const MeshLevel& mesh);

}  // namespace mixmg
