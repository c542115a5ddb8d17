#include "mixmg/verify.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mixmg {

namespace {

using SparseCM = Eigen::SparseMatrix<double>;
using Cholesky = Eigen::SimplicialLDLT<SparseCM>;

class RandomVectors {
 public:
  explicit RandomVectors(std::uint64_t seed) : gen_(seed) {}
  Vec next(Index n)
  {
    Vec v(n);
    for (Index i = 0; i < n; ++i)
      v[i] = dist_(gen_);
    return v;
  }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> dist_{-1.0, 1.0};
};

std::shared_ptr<Cholesky> factor_spd(const SpMat& A, const char* what)
{
  auto solver = std::make_shared<Cholesky>(SparseCM(A));
  if (solver->info() != Eigen::Success || (solver->vectorD().array() <= 0.0).any())
    throw std::runtime_error(std::string("eig_extremes: ") + what + " is not SPD");
  return solver;
}

std::string fmt(double v)
{
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string interval(double lo, double hi)
{
  return "[" + fmt(lo) + "," + fmt(hi) + "]";
}

}  // namespace

Vec random_vector(Index n, std::uint64_t seed)
{
  return RandomVectors(seed).next(n);
}

DenseMat dense_operator(const LinearOperator& op, Index n)
{
  DenseMat D(n, n);
  Vec e = Vec::Zero(n), col;
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    op(e, col);
    D.col(j) = col;
    e[j] = 0.0;
  }
  return D;
}

SpectralEstimate lanczos_extremes(const LinearOperator& A, const LinearOperator& P, Index n,
                                  int steps, std::uint64_t seed)
{
  if (n == 0 || steps < 1)
    throw std::invalid_argument("lanczos_extremes: empty problem");
  const int m = static_cast<int>(std::min<Index>(steps, n));
  std::vector<double> alpha, beta;
  Vec v_prev = Vec::Zero(n);
  Vec v = random_vector(n, seed);
  Vec z, Az, w;
  P(v, z);
  double b2 = z.dot(v);
  if (!(b2 > 0.0))
    throw std::runtime_error("lanczos_extremes: preconditioner is not SPD");
  double b = std::sqrt(b2);
  const double b0 = b;
  for (int j = 0; j < m; ++j) {
    v /= b;
    z /= b;
    A(z, Az);
    const double a = Az.dot(z);
    alpha.push_back(a);
    w = Az - a * v - b * v_prev;
    v_prev.swap(v);
    v.swap(w);
    P(v, z);
    b2 = z.dot(v);
    if (b2 < -1e-12 * b0 * b0)
      throw std::runtime_error("lanczos_extremes: preconditioner is not SPD");
    b = std::sqrt(std::max(b2, 0.0));
    if (j + 1 < m) {
      if (b <= 1e-14 * std::abs(a))
        break;
      beta.push_back(b);
    }
  }
  const Index k = static_cast<Index>(alpha.size());
  Vec diag = Eigen::Map<Vec>(alpha.data(), k);
  Vec sub = Vec::Zero(std::max<Index>(k - 1, 0));
  for (Index i = 0; i + 1 < k; ++i)
    sub[i] = beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<DenseMat> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  SpectralEstimate s;
  s.lambda_min = eig.eigenvalues().minCoeff();
  s.lambda_max = eig.eigenvalues().maxCoeff();
  s.method = "lanczos";
  s.budget = static_cast<int>(k);
  return s;
}

SpectralEstimate eig_extremes(const SpMat& A, const SpMat& M, const SpectralOptions& opts)
{
  const Index n = A.rows();
  if (n == 0 || A.cols() != n || M.rows() != n || M.cols() != n)
    throw std::invalid_argument("eig_extremes: shape mismatch");
  SpectralEstimate s;
  if (n < opts.dense_threshold) {
    const DenseMat Ad(A), Md(M);
    Eigen::LLT<DenseMat> check(Md);
    if (check.info() != Eigen::Success)
      throw std::runtime_error("eig_extremes: metric is not SPD");
    Eigen::GeneralizedSelfAdjointEigenSolver<DenseMat> eig(Ad, Md,
                                                            Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("eig_extremes: dense eigensolve failed");
    s.lambda_min = eig.eigenvalues().minCoeff();
    s.lambda_max = eig.eigenvalues().maxCoeff();
    s.method = "dense";
    return s;
  }
  auto Mf = factor_spd(M, "metric");
  auto Af = factor_spd(A, "operator");
  const LinearOperator Aop = matrix_operator(A);
  const LinearOperator Mop = matrix_operator(M);
  const LinearOperator Minv = [Mf](const Vec& r, Vec& x) { x = Mf->solve(r); };
  const LinearOperator Ainv = [Af](const Vec& r, Vec& x) { x = Af->solve(r); };
  const SpectralEstimate top = lanczos_extremes(Aop, Minv, n, opts.lanczos_steps, opts.seed);
  const SpectralEstimate inv = lanczos_extremes(Mop, Ainv, n, opts.lanczos_steps, opts.seed);
  s.lambda_min = 1.0 / inv.lambda_max;
  s.lambda_max = top.lambda_max;
  s.method = "lanczos";
  s.budget = opts.lanczos_steps;
  return s;
}

SpectralEstimate eig_extremes(const LinearOperator& A, const LinearOperator& P, Index n,
                              const SpectralOptions& opts)
{
  if (n >= opts.dense_threshold)
    return lanczos_extremes(A, P, n, opts.lanczos_steps, opts.seed);
  DenseMat Ad = dense_operator(A, n);
  DenseMat Pd = dense_operator(P, n);
  Ad = 0.5 * (Ad + Ad.transpose()).eval();
  Pd = 0.5 * (Pd + Pd.transpose()).eval();
  // Eigenvalues of P A = eigenvalues of the pencil with B = A.
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMat> eig(Pd, Ad,
                                                          Eigen::EigenvaluesOnly | Eigen::ABx_lx);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eig_extremes: operator is not SPD");
  SpectralEstimate s;
  s.lambda_min = eig.eigenvalues().minCoeff();
  s.lambda_max = eig.eigenvalues().maxCoeff();
  if (!(s.lambda_min > 0.0))
    throw std::runtime_error("eig_extremes: preconditioner is not SPD");
  s.method = "dense";
  return s;
}

bool all_pass(const CheckReport& report)
{
  return std::all_of(report.begin(), report.end(), [](const CheckRow& r) { return r.pass; });
}

void write_report(std::ostream& out, const CheckReport& report, bool header)
{
  if (header)
    out << "check,domain,level,value,threshold,pass\n";
  const auto old = out.precision(10);
  for (const CheckRow& r : report)
    out << r.check << ',' << r.domain << ',' << r.level << ',' << r.value << ",\""
        << r.threshold << "\"," << (r.pass ? "true" : "false") << '\n';
  out.precision(old);
}

std::vector<SpectralEstimate> schur_spectra(const Discretization& disc, int first, int last,
                                            const SpectralOptions& opts)
{
  std::vector<SpectralEstimate> out;
  for (int k = first; k <= last; ++k) {
    const DeRhamLevel& L = disc.complex(k);
    out.push_back(eig_extremes(schur_lumped(L).matrix(), L.Me, opts));
  }
  return out;
}

CheckReport check_poincare(Domain domain, const std::vector<SpectralEstimate>& spectra, int first)
{
  CheckReport rep;
  const std::string d(to_string(domain));
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const int level = first + static_cast<int>(i);
    rep.push_back({"poincare_lambda_min", d, level, spectra[i].lambda_min, ">0",
                   spectra[i].lambda_min > 0.0});
    if (i > 0) {
      const double ratio = spectra[i].lambda_min / spectra[i - 1].lambda_min;
      rep.push_back({"poincare_ratio", d, level, ratio, interval(0.8, 1.25),
                     ratio >= 0.8 && ratio <= 1.25});
    }
  }
  return rep;
}

CheckReport check_inverse_inequality(Domain domain, const MeshHierarchy& meshes,
                                     const std::vector<SpectralEstimate>& spectra, int first)
{
  CheckReport rep;
  const std::string d(to_string(domain));
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const int level = first + static_cast<int>(i);
    const double h = meshes.level(level).h;
    rep.push_back({"inverse_lambda_max_h2", d, level, spectra[i].lambda_max * h * h, "report", true});
    if (i > 0) {
      const double growth = spectra[i].lambda_max / spectra[i - 1].lambda_max;
      rep.push_back({"inverse_growth", d, level, growth, interval(3.0, 4.5),
                     growth >= 3.0 && growth <= 4.5});
    }
  }
  return rep;
}

double bab_ratio(const DeRhamLevel& level, int samples, std::uint64_t seed)
{
  const Index nv = level.B.rows();
  if (nv == 0)
    return 0.0;
  const DenseMat A = SchurOperator::exact(level).dense();
  Eigen::LLT<DenseMat> chol(A);
  if (chol.info() != Eigen::Success)
    throw std::runtime_error("bab_ratio: Schur complement is not SPD");
  RandomVectors rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec phi = rng.next(nv);
    const Vec t = level.B.transpose() * phi;
    const double num = t.dot(chol.solve(t));
    const double den = phi.dot(level.Mv * phi);
    worst = std::max(worst, num / den);
  }
  return worst;
}

CheckReport check_bab(Domain domain, const DeRhamLevel& level, int level_index, int samples,
                      std::uint64_t seed)
{
  const double r = bab_ratio(level, samples, seed);
  return {{"bab_ratio", std::string(to_string(domain)), level_index, r, "<=1+1e-10",
           r <= 1.0 + 1e-10}};
}

double infsup_constant(const DeRhamLevel& level)
{
  const DenseMat A = SchurOperator::exact(level).dense();
  Eigen::LLT<DenseMat> chol(A);
  if (chol.info() != Eigen::Success)
    throw std::runtime_error("infsup_constant: Schur complement is not SPD");
  const DenseMat Bd(level.B);
  DenseMat S = Bd * chol.solve(DenseMat(Bd.transpose()));
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMat> eig(S, DenseMat(level.Mv),
                                                          Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("infsup_constant: eigensolve failed");
  return eig.eigenvalues().minCoeff();
}

CheckReport check_infsup(const Discretization& disc, int first, int last)
{
  CheckReport rep;
  const std::string d(to_string(disc.mesh(1).domain));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = first; k <= last; ++k) {
    const double beta2 = infsup_constant(disc.complex(k));
    lo = std::min(lo, beta2);
    hi = std::max(hi, beta2);
    rep.push_back({"infsup_beta2", d, k, beta2, ">0", beta2 > 0.0});
  }
  const double variation = (hi - lo) / hi;
  rep.push_back({"infsup_variation", d, last, variation, "<0.2", variation < 0.2});
  return rep;
}

double commutator_defect(const DeRhamLevel& level, const SpMat& C)
{
  // Both products are accumulated in extended precision so the result
  // measures the assembled operators rather than the cost of evaluating them.
  using LMat = Eigen::SparseMatrix<long double, Eigen::RowMajor>;
  const Vec inv = level.Mv_lumped.cwiseInverse();
  const SpMat A = SpMat(weighted_gram(level.B, inv) + weighted_gram(C, level.Mf));
  const LMat G = level.G.cast<long double>();
  const LMat B = level.B.cast<long double>();
  const LMat D = diagonal_matrix(inv).cast<long double>();
  const LMat Ap = B * G;
  const LMat lhs = A.cast<long double>() * G;
  const LMat rhs = LMat(B.transpose()) * LMat(D * Ap);
  const LMat diff = lhs - rhs;
  long double m = 0.0L;
  for (Index r = 0; r < diff.outerSize(); ++r)
    for (LMat::InnerIterator it(diff, r); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return static_cast<double>(m);
}

CheckReport check_commutator(Domain domain, const DeRhamLevel& level, int level_index)
{
  const double defect = commutator_defect(level, level.C);
  return {{"commutator", std::string(to_string(domain)), level_index, defect, "<=1e-12",
           defect <= 1e-12}};
}

HodgeParts hodge_decompose(const DeRhamLevel& level, const Vec& u)
{
  if (u.size() != level.G.rows())
    throw std::invalid_argument("hodge_decompose: dimension mismatch");
  HodgeParts parts;
  const Vec Meu = level.Me * u;
  const double unorm2 = u.dot(Meu);
  if (level.G.cols() > 0) {
    const SpMat Ap = level.B * level.G;
    Cholesky solver{SparseCM(Ap)};
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("hodge_decompose: Poisson factorization failed");
    parts.potential = solver.solve(Vec(level.G.transpose() * Meu));
  } else {
    parts.potential = Vec::Zero(0);
  }
  parts.grad_part = level.G * parts.potential;
  parts.complement = u - parts.grad_part;
  if (unorm2 > 0.0) {
    const Vec Mc = level.Me * parts.complement;
    parts.orthogonality_defect = std::abs(parts.grad_part.dot(Mc)) / unorm2;
    parts.divergence_defect = (level.G.transpose() * Mc).norm() / std::sqrt(unorm2);
  }
  return parts;
}

CheckReport check_complex(const Discretization& disc)
{
  CheckReport rep;
  const std::string d(to_string(disc.mesh(1).domain));
  for (int k = 1; k <= disc.num_levels(); ++k) {
    const DeRhamLevel& L = disc.complex(k);
    const double cg = max_abs(SpMat(L.curl * L.grad));
    rep.push_back({"exactness_CG", d, k, cg, "==0", cg == 0.0});
    if (k == 1)
      continue;
    const MeshLevel& coarse = disc.mesh(k - 1);
    const MeshLevel& fine = disc.mesh(k);
    const DeRhamLevel& Lc = disc.complex(k - 1);
    const SpMat Pv = prolongation(TransferSpace::vertex, coarse, fine);
    const SpMat Pe = prolongation(TransferSpace::edge, coarse, fine);
    const SpMat P0 = prolongation(TransferSpace::p0, coarse, fine);
    const double grad_diagram = max_abs(SpMat(L.grad * Pv - Pe * Lc.grad));
    const double curl_diagram = max_abs(SpMat(L.curl * Pe - P0 * Lc.curl));
    rep.push_back({"commuting_grad", d, k, grad_diagram, "<=1e-14", grad_diagram <= 1e-14});
    rep.push_back({"commuting_curl", d, k, curl_diagram, "<=1e-14", curl_diagram <= 1e-14});
  }
  return rep;
}

double smoothing_constant(const SpMat& A, const SpectralOptions& opts)
{
  const SpMat lower = A.triangularView<Eigen::Lower>();
  const SpMat upper = A.triangularView<Eigen::Upper>();
  const SpMat Rinv = lower * diagonal_matrix(A.diagonal().cwiseInverse()) * upper;
  const LinearOperator I = identity_operator();
  const double top_r =
      lanczos_extremes(matrix_operator(Rinv), I, A.rows(), opts.lanczos_steps, opts.seed).lambda_max;
  const double top_a =
      lanczos_extremes(matrix_operator(A), I, A.rows(), opts.lanczos_steps, opts.seed).lambda_max;
  return top_r / top_a;
}

double lumping_equivalence(const DeRhamLevel& level, int samples, std::uint64_t seed)
{
  const SchurOperator lumped = schur_lumped(level);
  const SchurOperator exact = SchurOperator::exact(level);
  RandomVectors rng(seed);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec u = rng.next(lumped.size());
    const double r = u.dot(lumped * u) / u.dot(exact * u);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return std::max(hi, 1.0 / lo);
}

double operator_symmetry_defect(const LinearOperator& P, Index n, int pairs, std::uint64_t seed)
{
  RandomVectors rng(seed);
  double worst = 0.0;
  Vec Px, Py;
  for (int s = 0; s < pairs; ++s) {
    const Vec x = rng.next(n);
    const Vec y = rng.next(n);
    P(x, Px);
    P(y, Py);
    worst = std::max(worst, std::abs(Px.dot(y) - x.dot(Py)) / (x.norm() * y.norm()));
  }
  return worst;
}

double min_positivity(const LinearOperator& P, Index n, int samples, std::uint64_t seed)
{
  RandomVectors rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  Vec Px;
  for (int s = 0; s < samples; ++s) {
    const Vec x = rng.next(n);
    P(x, Px);
    worst = std::min(worst, Px.dot(x) / x.squaredNorm());
  }
  return worst;
}

std::pair<double, double> saddle_norm_ratio(const DeRhamLevel& level, int samples,
                                            std::uint64_t seed)
{
  const SchurOperator S = schur_lumped(level);
  Cholesky solver{SparseCM(S.matrix())};
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("saddle_norm_ratio: Schur factorization failed");
  const Vec& m = level.Mv_lumped;
  RandomVectors rng(seed);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec sigma = rng.next(level.B.rows());
    const Vec u = rng.next(level.B.cols());
    const Vec g = -m.cwiseProduct(sigma) + level.B * u;
    const Vec f = level.B.transpose() * sigma + level.curl_stiffness * u;
    const double num = std::sqrt(g.dot(m.cwiseInverse().cwiseProduct(g)))
                       + std::sqrt(f.dot(solver.solve(f)));
    const double den = std::sqrt(sigma.dot(m.cwiseProduct(sigma))) + std::sqrt(u.dot(S * u));
    const double r = num / den;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

const std::vector<std::string>& suite_names()
{
  static const std::vector<std::string> names{"complex",  "commutator", "hodge",     "poincare",
                                              "inverse",  "bab",        "infsup",    "multigrid",
                                              "lumping",  "smoothing",  "saddle"};
  return names;
}

CheckReport run_suite(const std::string& suite, Domain domain, int first, int last,
                      std::uint64_t seed)
{
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  if (first < 1 || last < first)
    throw std::invalid_argument("run_suite: bad level range");
  const std::string d(to_string(domain));
  const Discretization disc = build_discretization(domain, last);
  SpectralOptions opts;
  opts.seed = seed;
  CheckReport rep;
  if (suite == "complex") {
    rep = check_complex(disc);
  } else if (suite == "commutator") {
    for (int k = first; k <= last; ++k) {
      const CheckReport r = check_commutator(domain, disc.complex(k), k);
      rep.insert(rep.end(), r.begin(), r.end());
    }
  } else if (suite == "hodge") {
    for (int k = first; k <= last; ++k) {
      const DeRhamLevel& L = disc.complex(k);
      const HodgeParts parts = hodge_decompose(L, random_vector(L.G.rows(), seed));
      rep.push_back({"hodge_orthogonality", d, k, parts.orthogonality_defect, "<=1e-10",
                     parts.orthogonality_defect <= 1e-10});
      rep.push_back({"hodge_divergence", d, k, parts.divergence_defect, "<=1e-10",
                     parts.divergence_defect <= 1e-10});
    }
  } else if (suite == "poincare" || suite == "inverse") {
    const auto spectra = schur_spectra(disc, first, last, opts);
    rep = suite == "poincare" ? check_poincare(domain, spectra, first)
                              : check_inverse_inequality(domain, disc.meshes, spectra, first);
  } else if (suite == "bab") {
    for (int k = first; k <= last; ++k) {
      const CheckReport r = check_bab(domain, disc.complex(k), k, 100, seed);
      rep.insert(rep.end(), r.begin(), r.end());
    }
  } else if (suite == "infsup") {
    rep = check_infsup(disc, first, last);
  } else if (suite == "multigrid") {
    double previous = 0.0;
    for (int k = first; k <= last; ++k) {
      const SpMat A = schur_lumped(disc.complex(k)).matrix();
      std::vector<SpMat> ops;
      for (int j = 1; j <= k; ++j)
        ops.push_back(schur_lumped(disc.complex(j)).matrix());
      const MGHierarchy mg(std::move(ops),
                           std::vector<SpMat>(disc.edge_prolongation.begin(),
                                              disc.edge_prolongation.begin() + k),
                           smoothing_schedule(k, 2));
      const LinearOperator P = [&mg](const Vec& r, Vec& e) { mg.apply(r, e); };
      const double sym = operator_symmetry_defect(P, A.rows(), 50, seed);
      const double pos = min_positivity(P, A.rows(), 100, seed);
      const double kappa = eig_extremes(matrix_operator(A), P, A.rows(), opts).kappa();
      rep.push_back({"vcycle_symmetry", d, k, sym, "<=1e-12", sym <= 1e-12});
      rep.push_back({"vcycle_positivity", d, k, pos, ">0", pos > 0.0});
      const bool bounded = k == first || kappa <= 1.1 * previous + 0.5;
      rep.push_back({"vcycle_kappa", d, k, kappa, k == first ? "report" : "<=1.1*prev+0.5",
                     bounded});
      previous = kappa;
    }
  } else if (suite == "lumping") {
    for (int k = first; k <= last; ++k) {
      const double c = lumping_equivalence(disc.complex(k), 100, seed);
      rep.push_back({"lumping_equivalence", d, k, c, "<=4", c <= 4.0});
    }
  } else if (suite == "smoothing") {
    for (int k = std::max(first, 2); k <= last; ++k) {
      const double c = smoothing_constant(schur_lumped(disc.complex(k)).matrix(), opts);
      rep.push_back({"smoothing_CR", d, k, c, "<=10", c <= 10.0});
    }
  } else if (suite == "saddle") {
    for (int k = first; k <= last; ++k) {
      const auto [lo, hi] = saddle_norm_ratio(disc.complex(k), 100, seed);
      rep.push_back({"saddle_ratio_min", d, k, lo, ">=" + fmt(kSaddleRatioLow), lo >= kSaddleRatioLow});
      rep.push_back({"saddle_ratio_max", d, k, hi, "<=" + fmt(kSaddleRatioHigh), hi <= kSaddleRatioHigh});
    }
  }
  return rep;
}

}  // namespace mixmg
