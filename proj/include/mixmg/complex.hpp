#pragma once

#include "mixmg/mesh.hpp"
#include "mixmg/sparse.hpp"

#include <memory>
#include <span>

namespace mixmg {

enum class Space { vertex, edge, face };
enum class Differential { grad, curl };

/// Index maps between a full space and its interior (H_0) subspace.
struct InteriorIndex {
  std::vector<Index> to_full;
  /// -1 for boundary DoFs.
  std::vector<Index> to_interior;

  Index size() const { return static_cast<Index>(to_full.size()); }
  Index full_size() const { return static_cast<Index>(to_interior.size()); }
};

InteriorIndex interior_index(std::span<const std::uint8_t> boundary_flags);

/// Signed incidence: grad -> edges x vertices, curl -> triangles x edges.
SpMat differential_matrix(const MeshLevel& mesh, Differential which);

/// Exact mass matrices: P1 hats, Whitney 1-forms, scaled indicators (1/|T|).
SpMat assemble_mass(const MeshLevel& mesh, Space space);

/// Diagonal of the lumped mass: row sums for vertices, diag(M) for edges and
/// faces. Throws if an entry is not positive.
Vec lump_mass(const SpMat& M, Space space);

SpMat restrict_interior(const SpMat& A, const InteriorIndex& rows, const InteriorIndex& cols);
Vec restrict_interior(const Vec& v, const InteriorIndex& dofs);
/// Zero-extends an interior vector to the full space.
Vec extend_interior(const Vec& v, const InteriorIndex& dofs);

/// Load of a constant field against every edge basis function (full space).
Vec load_vector(const MeshLevel& mesh, Point field);

/// Discrete de Rham complex on one level.
///
/// Full-space operators include boundary DoFs; the short names (G, C, Mv, ...)
/// act on the interior spaces S_h subset H^1_0 and U_h subset H_0(curl).
struct DeRhamLevel {
  SpMat grad;
  SpMat curl;
  SpMat mass_vertex;
  SpMat mass_edge;
  SpMat mass_face;
  Vec lumped_vertex;
  Vec lumped_edge;
  InteriorIndex vertex_dofs;
  InteriorIndex edge_dofs;

  SpMat G;        // interior edges x interior vertices
  SpMat C;        // triangles x interior edges
  SpMat Mv;
  SpMat Me;
  Vec Mv_lumped;
  Vec Mf;         // diagonal of the face mass
  SpMat B;        // G^T Me, the weak (negative) divergence
  SpMat curl_stiffness;  // C^T Mf C

  /// dim S_h + dim U_h including boundary DoFs.
  Index full_dofs() const { return vertex_dofs.full_size() + edge_dofs.full_size(); }
};

DeRhamLevel assemble_de_rham(const MeshLevel& mesh);

/// The vector Laplacian B^T Mv^{-1} B + C^T Mf C on interior edges, either with
/// the lumped vertex mass (explicit sparse matrix) or with the consistent mass
/// (operator only, Mv^{-1} applied by a sparse Cholesky solve).
class SchurOperator {
 public:
  enum class Variant { exact, lumped };

  static SchurOperator lumped(const DeRhamLevel& level);
  static SchurOperator exact(const DeRhamLevel& level);

  Variant variant() const { return variant_; }
  Index size() const { return size_; }
  void apply(const Vec& u, Vec& out) const;
  Vec operator*(const Vec& u) const;
  /// Throws for the exact variant.
  const SpMat& matrix() const;
  /// Dense assembly; intended for small verification problems.
  DenseMat dense() const;

 private:
  struct ExactData;
  Variant variant_ = Variant::lumped;
  Index size_ = 0;
  SpMat matrix_;
  std::shared_ptr<const ExactData> exact_;
};

SchurOperator schur_lumped(const DeRhamLevel& level);
Vec schur_exact_apply(const DeRhamLevel& level, const Vec& u);

}  // namespace mixmg
