#pragma once

#include "mixmg/krylov.hpp"
#include "mixmg/multigrid.hpp"
#include "mixmg/problems.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mixmg {

struct SpectralOptions {
  /// Dense eigensolves below this size, Lanczos above.
  Index dense_threshold = 5000;
  int lanczos_steps = 60;
  std::uint64_t seed = 42;
};

struct SpectralEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::string method;  // "dense" or "lanczos"
  int budget = 0;      // Lanczos steps (0 for dense)

  double kappa() const { return lambda_max / lambda_min; }
};

/// Extreme eigenvalues of the pencil A x = lambda M x (A, M SPD). The Lanczos
/// path runs on M^{-1} A for lambda_max and on A^{-1} M for lambda_min.
/// Throws std::runtime_error when M (or A on the Lanczos path) is not SPD.
SpectralEstimate eig_extremes(const SpMat& A, const SpMat& M, const SpectralOptions& opts = {});

/// Extreme eigenvalues of P A, with A SPD and P SPD (e.g. a V-cycle).
SpectralEstimate eig_extremes(const LinearOperator& A, const LinearOperator& P, Index n,
                              const SpectralOptions& opts = {});

/// Ritz values of P A after `steps` preconditioned Lanczos steps from a seeded
/// random start vector.
SpectralEstimate lanczos_extremes(const LinearOperator& A, const LinearOperator& P, Index n,
                                  int steps, std::uint64_t seed);

/// Dense matrix of a linear operator of size n (column by column).
DenseMat dense_operator(const LinearOperator& op, Index n);

/// Seeded vector with entries uniform in [-1, 1].
Vec random_vector(Index n, std::uint64_t seed);

/// One line of a verification report.
struct CheckRow {
  std::string check;
  std::string domain;
  int level = 0;
  double value = 0.0;
  std::string threshold;
  bool pass = true;
};

using CheckReport = std::vector<CheckRow>;

bool all_pass(const CheckReport& report);
void write_report(std::ostream& out, const CheckReport& report, bool header = true);

/// (Ã_k, M_e,k) spectra for levels first..last.
std::vector<SpectralEstimate> schur_spectra(const Discretization& disc, int first, int last,
                                            const SpectralOptions& opts = {});

/// lambda_min per level, gated on consecutive ratios in [0.8, 1.25].
CheckReport check_poincare(Domain domain, const std::vector<SpectralEstimate>& spectra, int first);
/// lambda_max growth per refinement in [3.0, 4.5]; also lambda_max h^2 per level.
CheckReport check_inverse_inequality(Domain domain, const MeshHierarchy& meshes,
                                     const std::vector<SpectralEstimate>& spectra, int first);

/// Max Rayleigh ratio <B A^{-1} B^T phi, phi> / <Mv phi, phi> over seeded random
/// phi, with A the consistent-mass Schur complement. Gate: <= 1 + 1e-10.
double bab_ratio(const DeRhamLevel& level, int samples, std::uint64_t seed);
CheckReport check_bab(Domain domain, const DeRhamLevel& level, int level_index, int samples = 100,
                      std::uint64_t seed = 42);

/// lambda_min(Mv^{-1} B A^{-1} B^T) with the consistent-mass Schur complement.
double infsup_constant(const DeRhamLevel& level);
/// Per-level values; gate: (max - min) / max < 0.2.
CheckReport check_infsup(const Discretization& disc, int first, int last);

/// max |A G - B^T Mv~^{-1} A_p| with A = B^T Mv~^{-1} B + C^T Mf C for the
/// given curl matrix C (triangles x interior edges) and A_p = B G.
double commutator_defect(const DeRhamLevel& level, const SpMat& C);
CheckReport check_commutator(Domain domain, const DeRhamLevel& level, int level_index);

struct HodgeParts {
  Vec potential;
  Vec grad_part;
  Vec complement;
  /// |<Me grad, comp>| / ||u||^2_Me
  double orthogonality_defect = 0.0;
  /// ||G^T Me comp|| / ||u||_Me
  double divergence_defect = 0.0;
};

/// u = G p + comp with (G^T Me G) p = G^T Me u.
HodgeParts hodge_decompose(const DeRhamLevel& level, const Vec& u);

/// Exactness and commuting prolongations: max |C G| and
/// max |G_f P_v - P_e G_c|, max |C_f P_e - P_0 C_c| on full spaces.
CheckReport check_complex(const Discretization& disc);

/// Smoothing constant C_R = lambda_max(R_sgs^{-1}) / lambda_max(A) for the
/// symmetric Gauss-Seidel smoother R_sgs of A.
double smoothing_constant(const SpMat& A, const SpectralOptions& opts = {});

/// max(max ratio, 1 / min ratio) of <Ã u, u> / <A u, u> over seeded random u.
double lumping_equivalence(const DeRhamLevel& level, int samples, std::uint64_t seed);

/// Relative symmetry defect max |<Px,y> - <x,Py>| / (|x||y|) over pairs.
double operator_symmetry_defect(const LinearOperator& P, Index n, int pairs, std::uint64_t seed);
/// min <Px,x> / |x|^2 over seeded random x.
double min_positivity(const LinearOperator& P, Index n, int samples, std::uint64_t seed);

/// Fixed interval the saddle witness ratio must stay in on every level.
inline constexpr double kSaddleRatioLow = 0.5;
inline constexpr double kSaddleRatioHigh = 2.0;

/// Witness for the uniform bound of the lumped saddle operator: ratio
/// (|g|_{Mv~^{-1}} + |f|_{Ã^{-1}}) / (|sigma|_{Mv~} + |u|_Ã) for (g, f) = L(sigma, u),
/// returned as (min, max) over seeded random pairs.
std::pair<double, double> saddle_norm_ratio(const DeRhamLevel& level, int samples,
                                            std::uint64_t seed);

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs one named suite on levels first..last of `domain`. Throws
/// std::invalid_argument for an unknown suite name.
CheckReport run_suite(const std::string& suite, Domain domain, int first, int last,
                      std::uint64_t seed = 42);

}  // namespace mixmg
