#pragma once

#include "mixmg/krylov.hpp"
#include "mixmg/multigrid.hpp"
#include "mixmg/problems.hpp"

#include <memory>

namespace mixmg {

enum class PrecondKind { diag_vlap, tri_vlap, diag_maxwell, tri_maxwell };

/// Variable V-cycles on the non-inherited hierarchies of one discretization.
/// Level k uses the operator assembled on mesh k.
std::shared_ptr<const MGHierarchy> schur_vcycle(const Discretization& disc, int finest, int mJ);
/// Same for the rotated (div-side) Schur matrix; needs the rotated complex.
std::shared_ptr<const MGHierarchy> rotated_schur_vcycle(const Discretization& disc, int finest,
                                                        int mJ);
/// Same for the scalar Laplacian A_p = B G on interior vertices.
std::shared_ptr<const MGHierarchy> poisson_vcycle(const Discretization& disc, int finest, int mJ);

/// One V-cycle per application.
LinearOperator vcycle_operator(std::shared_ptr<const MGHierarchy> mg);
/// Sparse Cholesky solve with A (verification only).
LinearOperator direct_inverse(const SpMat& A);

/// Block preconditioners for the saddle systems. Inner inverses are arbitrary
/// operators so the same code runs with V-cycles and with exact solves.
///
///   diag_vlap:    (g, f) -> (Mv~^{-1} g, S f)
///   tri_vlap:     y1 = -Mv~^{-1} g, y2 = S (f - B^T y1),
///                 (x1, x2) = (y1 + Mv~^{-1} B y2, y2)
///   diag_maxwell: (f, g) -> (S f, Mv~^{-1} g)
///   tri_maxwell:  y1 = S f, y2 = Sp (g - B y1),
///                 (x1, x2) = (y1 + G y2, -Mv~^{-1} A_p y2)
///
/// S approximates the vector Laplacian inverse and Sp the scalar one.
class BlockPreconditioner {
 public:
  static BlockPreconditioner diag_vlap(Vec Mv_lumped, Index edge_size,
                                       LinearOperator schur_inverse);
  static BlockPreconditioner tri_vlap(Vec Mv_lumped, SpMat B, LinearOperator schur_inverse);
  static BlockPreconditioner diag_maxwell(Vec Mv_lumped, Index edge_size,
                                          LinearOperator schur_inverse);
  static BlockPreconditioner tri_maxwell(Vec Mv_lumped, SpMat B, SpMat G, SpMat Ap,
                                         LinearOperator schur_inverse,
                                         LinearOperator poisson_inverse);

  PrecondKind kind() const { return kind_; }
  Index size() const;
  void apply(const Vec& r, Vec& out) const;
  Vec operator()(const Vec& r) const;
  LinearOperator as_operator() const;

 private:
  struct Data {
    Vec Mv_inv;
    SpMat B;
    SpMat Bt;
    SpMat G;
    SpMat Ap;
    Index edge_size = 0;
    LinearOperator schur;
    LinearOperator poisson;
  };
  PrecondKind kind_ = PrecondKind::diag_vlap;
  std::shared_ptr<const Data> data_;
};

/// Production preconditioner (one V-cycle per inverse) for `sys`, built on
/// level `level` of `disc`. `triangular` picks tri over diag.
BlockPreconditioner make_preconditioner(const Discretization& disc, int level,
                                        ProblemKind problem, bool triangular, int mJ);

/// Krylov method paired with each preconditioner: MINRES for diag, GMRES for tri.
KrylovMethod method_for(PrecondKind kind);

}  // namespace mixmg
