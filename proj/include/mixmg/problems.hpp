#pragma once

#include "mixmg/complex.hpp"
#include "mixmg/mesh.hpp"
#include "mixmg/rotated.hpp"

#include <string_view>
#include <vector>

namespace mixmg {

enum class ProblemKind { curl_vlap, div_vlap, maxwell };

/// Accepts "curl", "div", "maxwell" (and the enum spellings).
ProblemKind parse_problem(std::string_view name);
std::string_view to_string(ProblemKind kind);

/// Block system [[A11, A12], [A21, A22]] on interior DoFs.
struct SaddleSystem {
  ProblemKind kind = ProblemKind::curl_vlap;
  SpMat matrix;
  Vec rhs;
  Index first_size = 0;
  Index second_size = 0;
  /// DoF count of the level including boundary DoFs.
  Index full_dofs = 0;
  double h = 0.0;

  Index size() const { return first_size + second_size; }
};

/// Constant field used for every right-hand side.
inline constexpr Point kLoadField{1.0, 1.0};

/// Edge load of kLoadField restricted to interior edges.
Vec interior_load(const MeshLevel& mesh, const DeRhamLevel& level);

/// [[-Mv_lumped, B], [B^T, C^T Mf C]], rhs (0, f).
SaddleSystem build_curl_saddle(const MeshLevel& mesh, const DeRhamLevel& level);

/// [[-Mv_lumped, rot^T M_flux], [M_flux rot, div^T Mt div]], rhs (0, f) where f
/// is the RT0 load of kLoadField turned clockwise.
SaddleSystem build_div_saddle(const MeshLevel& mesh, const DeRhamLevel& level,
                              const RotatedLevel& rotated);

/// Augmented Maxwell system [[A, B^T], [B, 0]] with
/// A = C^T Mf C + B^T Mv_lumped^{-1} B, rhs (f, 0).
SaddleSystem build_maxwell(const MeshLevel& mesh, const DeRhamLevel& level);

/// The same constraint without augmentation: [[C^T Mf C, B^T], [B, 0]], rhs (f, 0).
SaddleSystem build_maxwell_unaugmented(const MeshLevel& mesh, const DeRhamLevel& level);

/// All levels of one domain with interior-restricted transfer operators.
struct Discretization {
  MeshHierarchy meshes;
  std::vector<DeRhamLevel> complexes;
  /// Empty unless requested.
  std::vector<RotatedLevel> rotated;
  /// Index k maps level k to level k+1 (1-based levels); index 0 is empty.
  std::vector<SpMat> vertex_prolongation;
  std::vector<SpMat> edge_prolongation;
  std::vector<SpMat> flux_prolongation;

  int num_levels() const { return meshes.num_levels(); }
  const MeshLevel& mesh(int k) const { return meshes.level(k); }
  const DeRhamLevel& complex(int k) const { return complexes.at(static_cast<std::size_t>(k - 1)); }
  const RotatedLevel& rotated_level(int k) const { return rotated.at(static_cast<std::size_t>(k - 1)); }
};

Discretization build_discretization(Domain domain, int levels, bool with_rotated = false);

SaddleSystem build_system(ProblemKind kind, const Discretization& disc, int level);

/// Splits a block vector into its two parts.
std::pair<Vec, Vec> split(const SaddleSystem& sys, const Vec& x);

}  // namespace mixmg
