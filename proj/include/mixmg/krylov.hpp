#pragma once

#include "mixmg/sparse.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixmg {

/// out = Op(in). Implementations must not keep state between calls, so one
/// operator can serve concurrent solves.
using LinearOperator = std::function<void(const Vec& in, Vec& out)>;

LinearOperator matrix_operator(const SpMat& A);
LinearOperator identity_operator();

enum class KrylovMethod { minres, gmres };

struct KrylovConfig {
  KrylovMethod method = KrylovMethod::minres;
  /// Stop when ||b - A x|| <= tol * ||b|| (Euclidean, unpreconditioned).
  double tol = 1e-8;
  int max_iterations = 1000;
  /// GMRES restart length.
  int restart = 20;
  /// Keep the relative residual after every iteration.
  bool record_history = false;
};

struct SolveReport {
  /// MINRES: Lanczos steps. GMRES: inner iterations summed over restarts.
  int iterations = 0;
  double relative_residual = 0.0;
  double seconds = 0.0;
  bool converged = false;
  std::string message;
  /// Relative true residual per iteration (entry 0 is the initial guess).
  std::vector<double> residual_history;
  /// MINRES only: preconditioned residual norm estimate per iteration.
  std::vector<double> preconditioned_history;
};

struct SolveResult {
  Vec x;
  SolveReport report;
};

/// Raised when the preconditioner handed to MINRES is not positive definite.
class IndefinitePreconditioner : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Preconditioned MINRES for symmetric A with SPD preconditioner P.
SolveResult minres(const LinearOperator& A, const LinearOperator& P, const Vec& b,
                   const KrylovConfig& cfg);

/// Right-preconditioned restarted GMRES: solves A P y = b, x = P y.
SolveResult gmres(const LinearOperator& A, const LinearOperator& P, const Vec& b,
                  const KrylovConfig& cfg);

SolveResult solve(const LinearOperator& A, const LinearOperator& P, const Vec& b,
                  const KrylovConfig& cfg);

}  // namespace mixmg
