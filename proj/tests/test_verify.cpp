#include "mixmg/verify.hpp"

#include <doctest.h>

#include <sstream>

using namespace mixmg;

namespace {

SpMat diag(std::initializer_list<double> d)
{
  Vec v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d)
    v[i++] = x;
  return diagonal_matrix(v);
}

SpMat laplacian_1d(Index n)
{
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0)
      t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n)
      t.emplace_back(i, i + 1, -1.0);
  }
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

SpectralOptions lanczos_only(int steps = 80)
{
  SpectralOptions o;
  o.dense_threshold = 0;
  o.lanczos_steps = steps;
  return o;
}

}  // namespace

TEST_CASE("pencil extremes on diagonal matrices")
{
  for (const SpectralOptions& o : {SpectralOptions{}, lanczos_only(2)}) {
    const SpectralEstimate e = eig_extremes(diag({1.0, 4.0}), diag({1.0, 1.0}), o);
    CHECK(e.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.lambda_max == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(e.kappa() == doctest::Approx(4.0).epsilon(1e-12));

    const SpectralEstimate same = eig_extremes(diag({2.0, 3.0, 5.0}), diag({2.0, 3.0, 5.0}), o);
    CHECK(same.kappa() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(eig_extremes(diag({1.0, 4.0}), diag({1.0, 1.0})).method == "dense");
  CHECK(eig_extremes(diag({1.0, 4.0}), diag({1.0, 1.0}), lanczos_only(2)).method == "lanczos");
}

TEST_CASE("Lanczos agrees with the dense pencil solve")
{
  const Discretization disc = build_discretization(Domain::lshape, 3);
  const DeRhamLevel& L = disc.complex(3);
  const SpMat A = schur_lumped(L).matrix();
  const SpectralEstimate dense = eig_extremes(A, L.Me);
  const SpectralEstimate ritz = eig_extremes(A, L.Me, lanczos_only());
  CHECK(dense.method == "dense");
  CHECK(ritz.method == "lanczos");
  CHECK(ritz.budget == 80);
  CHECK(std::abs(ritz.lambda_min - dense.lambda_min) <= 0.05 * dense.lambda_min);
  CHECK(std::abs(ritz.lambda_max - dense.lambda_max) <= 0.05 * dense.lambda_max);
  // Ritz values lie inside the spectrum.
  CHECK(ritz.lambda_min >= dense.lambda_min * (1.0 - 1e-8));
  CHECK(ritz.lambda_max <= dense.lambda_max * (1.0 + 1e-8));

  const SpMat D = diag({1.0, -1.0});
  CHECK_THROWS_AS(eig_extremes(diag({1.0, 2.0}), D), std::runtime_error);
  CHECK_THROWS_AS(eig_extremes(diag({1.0, 2.0}), D, lanczos_only(2)), std::runtime_error);
}

TEST_CASE("operator spectra of P A")
{
  const SpMat A = laplacian_1d(30);
  const Vec d = A.diagonal();
  const LinearOperator P = [d](const Vec& in, Vec& out) { out = in.cwiseQuotient(d); };
  const SpectralEstimate e = eig_extremes(matrix_operator(A), P, 30);
  // Jacobi-scaled 1D Laplacian: eigenvalues 1 - cos(k pi / 31).
  const double pi = std::acos(-1.0);
  CHECK(e.lambda_min == doctest::Approx(1.0 - std::cos(pi / 31.0)).epsilon(1e-10));
  CHECK(e.lambda_max == doctest::Approx(1.0 + std::cos(pi / 31.0)).epsilon(1e-10));
  const SpectralEstimate r = eig_extremes(matrix_operator(A), P, 30, lanczos_only(30));
  CHECK(r.lambda_max == doctest::Approx(e.lambda_max).epsilon(1e-8));
}

TEST_CASE("dense_operator and random_vector")
{
  const SpMat A = laplacian_1d(5);
  CHECK((dense_operator(matrix_operator(A), 5) - to_dense(A)).norm() == 0.0);
  const Vec a = random_vector(50, 9), b = random_vector(50, 9), c = random_vector(50, 10);
  CHECK((a - b).norm() == 0.0);
  CHECK((a - c).norm() > 0.0);
  CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("B A^{-1} B^T equals the vertex mass")
{
  for (Domain d : {Domain::square, Domain::lshape}) {
    const Discretization disc = build_discretization(d, d == Domain::square ? 3 : 4);
    const DeRhamLevel& L = disc.complex(disc.num_levels());
    CHECK(bab_ratio(L, 20, 42) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(infsup_constant(L) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(all_pass(check_bab(d, L, disc.num_levels(), 20)));

    // Independent dense check of the identity.
    const DenseMat B = to_dense(L.B), Mv = to_dense(L.Mv), C = to_dense(L.C);
    const DenseMat A = B.transpose() * Mv.llt().solve(B) + C.transpose() * L.Mf.asDiagonal() * C;
    const DenseMat BAB = B * A.llt().solve(B.transpose());
    CHECK((BAB - Mv).cwiseAbs().maxCoeff() <= 1e-10 * Mv.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("commutator defect detects a corrupted curl")
{
  const Discretization disc = build_discretization(Domain::square, 5);
  const DeRhamLevel& L = disc.complex(5);
  CHECK(commutator_defect(L, L.C) <= 1e-12);
  SpMat bad = L.C;
  bad.valuePtr()[bad.nonZeros() / 2] *= -1.0;
  CHECK(commutator_defect(L, bad) > 1e-3);
  CHECK(all_pass(check_commutator(Domain::square, L, 5)));
}

TEST_CASE("Hodge decomposition")
{
  const Discretization disc = build_discretization(Domain::crack, 3);
  const DeRhamLevel& L = disc.complex(3);

  const Vec p = random_vector(L.G.cols(), 1);
  const HodgeParts g = hodge_decompose(L, L.G * p);
  CHECK(g.complement.norm() <= 1e-10 * (L.G * p).norm());
  CHECK((g.potential - p).norm() <= 1e-8 * p.norm());

  const Vec u = random_vector(L.G.rows(), 2);
  const HodgeParts h = hodge_decompose(L, u);
  CHECK((h.grad_part + h.complement - u).norm() <= 1e-13 * u.norm());
  CHECK(h.orthogonality_defect <= 1e-12);
  CHECK(h.divergence_defect <= 1e-12);
  // The complement has no gradient part left.
  CHECK(hodge_decompose(L, h.complement).grad_part.norm() <= 1e-10 * h.complement.norm());
}

TEST_CASE("smoothing constant")
{
  CHECK(smoothing_constant(diag({1.0, 2.0, 3.0})) == doctest::Approx(1.0).epsilon(1e-10));

  // Dense oracle: R_sgs^{-1} = (D + L) D^{-1} (D + U).
  const SpMat A = laplacian_1d(40);
  const DenseMat Ad = to_dense(A);
  const DenseMat DL = Ad.triangularView<Eigen::Lower>();
  const DenseMat DU = Ad.triangularView<Eigen::Upper>();
  const DenseMat Rinv = DL * Ad.diagonal().cwiseInverse().asDiagonal() * DU;
  const double expected =
      Eigen::SelfAdjointEigenSolver<DenseMat>(Rinv).eigenvalues().maxCoeff()
      / Eigen::SelfAdjointEigenSolver<DenseMat>(Ad).eigenvalues().maxCoeff();
  CHECK(smoothing_constant(A, lanczos_only(40)) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("lumping equivalence and saddle witness")
{
  const Discretization disc = build_discretization(Domain::square, 4);
  for (int k = 2; k <= 4; ++k) {
    const double c = lumping_equivalence(disc.complex(k), 20, 42);
    CHECK(c >= 1.0);
    CHECK(c <= 3.0);
    const auto [lo, hi] = saddle_norm_ratio(disc.complex(k), 20, 42);
    CHECK(lo <= hi);
    CHECK(lo >= kSaddleRatioLow);
    CHECK(hi <= kSaddleRatioHigh);
  }
}

TEST_CASE("operator probes")
{
  const SpMat A = laplacian_1d(20);
  CHECK(operator_symmetry_defect(matrix_operator(A), 20, 5, 1) <= 1e-15);
  SpMat N = A;
  N.coeffRef(0, 1) = 3.0;
  CHECK(operator_symmetry_defect(matrix_operator(N), 20, 5, 1) > 1e-3);
  CHECK(min_positivity(identity_operator(), 20, 5, 1) == doctest::Approx(1.0));
  CHECK(min_positivity(matrix_operator(A), 20, 5, 1) > 0.0);
  CHECK(min_positivity(matrix_operator(SpMat(-A)), 20, 5, 1) < 0.0);
}

TEST_CASE("gates on synthetic spectra")
{
  auto estimate = [](double lo, double hi) {
    SpectralEstimate e;
    e.lambda_min = lo;
    e.lambda_max = hi;
    return e;
  };
  CHECK(all_pass(check_poincare(Domain::square, {estimate(9.8, 1), estimate(9.9, 1)}, 2)));
  CHECK_FALSE(all_pass(check_poincare(Domain::square, {estimate(9.8, 1), estimate(3.0, 1)}, 2)));

  const MeshHierarchy H = build_hierarchy(Domain::square, 4);
  CHECK(all_pass(check_inverse_inequality(Domain::square, H,
                                          {estimate(1, 100), estimate(1, 400), estimate(1, 1600)}, 2)));
  CHECK_FALSE(all_pass(
      check_inverse_inequality(Domain::square, H, {estimate(1, 100), estimate(1, 200)}, 2)));
}

TEST_CASE("suites run, are seeded and write CSV")
{
  CHECK_THROWS_AS(run_suite("nope", Domain::square, 2, 3), std::invalid_argument);
  for (const std::string& s : suite_names()) {
    if (s == "poincare" || s == "inverse" || s == "multigrid" || s == "smoothing" || s == "bab"
        || s == "infsup")
      continue;  // covered at larger sizes by the acceptance run
    const CheckReport rep = run_suite(s, Domain::square, 2, 3, 7);
    CHECK_FALSE(rep.empty());
    CHECK(all_pass(rep));
  }

  const CheckReport a = run_suite("lumping", Domain::lshape, 2, 3, 11);
  const CheckReport b = run_suite("lumping", Domain::lshape, 2, 3, 11);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].value == b[i].value);

  std::ostringstream out;
  write_report(out, {{"x", "square", 3, 0.5, "<=1", true}});
  CHECK(out.str() == "check,domain,level,value,threshold,pass\nx,square,3,0.5,\"<=1\",true\n");
  CHECK_FALSE(all_pass({{"x", "square", 3, 2.0, "<=1", false}}));
}
