#pragma once

#include "mixmg/mesh.hpp"
#include "mixmg/sparse.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace mixmg {

enum class TransferSpace { vertex, edge, p0 };
enum class SweepDirection { forward, backward };

/// Natural inclusion of the coarse finite element space into the fine one
/// (full spaces, boundary DoFs included). Throws unless fine = refine(coarse).
SpMat prolongation(TransferSpace space, const MeshLevel& coarse, const MeshLevel& fine);

/// m_k = ceil(1.5^(J-k) * mJ), returned for k = 1..J.
std::vector<int> smoothing_schedule(int levels, int finest_steps);

/// Diagonal and row access for point Gauss-Seidel on one matrix.
class Smoother {
 public:
  explicit Smoother(const SpMat& A);

  /// One in-place lexicographic sweep over the rows in the given direction.
  void sweep(Vec& x, const Vec& b, SweepDirection direction) const;

  const SpMat& matrix() const { return *A_; }

 private:
  const SpMat* A_;
  Vec inv_diag_;
};

/// Throws std::invalid_argument on a zero (or negative) diagonal entry.
void gauss_seidel_sweep(const SpMat& A, Vec& x, const Vec& b, SweepDirection direction);

/// Variable V-cycle on a non-inherited hierarchy, used only as a
/// preconditioner: one call applies MG_J once with zero initial guess.
///
/// Level k runs m_k forward sweeps, a single recursive coarse correction and
/// m_k backward sweeps; level 1 is a dense Cholesky solve. The forward/backward
/// pairing makes the cycle a symmetric operator.
class MGHierarchy {
 public:
  /// operators[k-1] = A_k, prolongations[k-1] = I^k from level k-1 to k
  /// (prolongations[0] is ignored and may be empty).
  MGHierarchy(std::vector<SpMat> operators, std::vector<SpMat> prolongations,
              std::vector<int> smoothing);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  Index size() const;
  const SpMat& op(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)).A; }
  const SpMat& prolongation(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)).P; }
  int smoothing(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)).steps; }

  /// e = MG_J(r; 0, m_J). Allocates its own work buffers, so concurrent calls
  /// are safe.
  void apply(const Vec& r, Vec& e) const;
  Vec operator()(const Vec& r) const;

  /// Writes `level,size,nnz,smoothing` rows.
  void write_diagnostics(std::ostream& out) const;

 private:
  struct Level {
    SpMat A;
    SpMat P;
    SpMat R;
    int steps = 0;
    std::unique_ptr<Smoother> smoother;
  };
  void cycle(std::size_t k, const Vec& f, Vec& u) const;

  std::vector<Level> levels_;
  Eigen::LLT<DenseMat> coarse_;
};

}  // namespace mixmg
