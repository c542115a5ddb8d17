#include "mixmg/precond.hpp"

#include <doctest.h>

#include <random>

using namespace mixmg;

namespace {

Vec random_vector(Index n, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Vec::NullaryExpr(n, [&] { return u(rng); });
}

DenseMat dense_of(const BlockPreconditioner& P)
{
  const Index n = P.size();
  DenseMat D(n, n);
  for (Index j = 0; j < n; ++j)
    D.col(j) = P(Vec::Unit(n, j));
  return D;
}

}  // namespace

TEST_CASE("triangular preconditioners with exact blocks invert the saddle systems")
{
  for (Domain d : {Domain::square, Domain::crack}) {
    const Discretization disc = build_discretization(d, 3);
    const DeRhamLevel& L = disc.complex(3);
    const SpMat A = schur_lumped(L).matrix();
    const SpMat Ap = L.B * L.G;

    const SaddleSystem curl = build_system(ProblemKind::curl_vlap, disc, 3);
    const auto Pc = BlockPreconditioner::tri_vlap(L.Mv_lumped, L.B, direct_inverse(A));
    const Vec x = random_vector(curl.size(), 1);
    CHECK((Pc(curl.matrix * x) - x).norm() <= 1e-10 * x.norm());

    const SaddleSystem mx = build_system(ProblemKind::maxwell, disc, 3);
    const auto Pm = BlockPreconditioner::tri_maxwell(L.Mv_lumped, L.B, L.G, Ap, direct_inverse(A),
                                                     direct_inverse(Ap));
    const Vec y = random_vector(mx.size(), 2);
    CHECK((Pm(mx.matrix * y) - y).norm() <= 1e-10 * y.norm());

    // Hence GMRES needs a single step.
    KrylovConfig c;
    c.method = KrylovMethod::gmres;
    c.tol = 1e-8;
    CHECK(solve(matrix_operator(curl.matrix), Pc.as_operator(), curl.rhs, c).report.iterations == 1);
    CHECK(solve(matrix_operator(mx.matrix), Pm.as_operator(), mx.rhs, c).report.iterations == 1);
  }
}

TEST_CASE("diagonal preconditioners apply the blocks independently")
{
  const Discretization disc = build_discretization(Domain::lshape, 3);
  const DeRhamLevel& L = disc.complex(3);
  const SpMat A = schur_lumped(L).matrix();
  const Index nv = L.Mv_lumped.size(), ne = A.rows();
  const Vec g = random_vector(nv, 3), f = random_vector(ne, 4);
  Eigen::SimplicialLDLT<SpMat> chol(A);

  Vec r(nv + ne);
  r << g, f;
  const Vec x = BlockPreconditioner::diag_vlap(L.Mv_lumped, ne, direct_inverse(A))(r);
  CHECK((x.head(nv) - g.cwiseQuotient(L.Mv_lumped)).norm() <= 1e-14 * x.head(nv).norm());
  CHECK((x.tail(ne) - chol.solve(f)).norm() <= 1e-10 * x.tail(ne).norm());

  Vec s(ne + nv);
  s << f, g;
  const Vec y = BlockPreconditioner::diag_maxwell(L.Mv_lumped, ne, direct_inverse(A))(s);
  CHECK((y.head(ne) - chol.solve(f)).norm() <= 1e-10 * y.head(ne).norm());
  CHECK((y.tail(nv) - g.cwiseQuotient(L.Mv_lumped)).norm() <= 1e-14 * y.tail(nv).norm());

  CHECK_THROWS_AS(BlockPreconditioner::diag_vlap(L.Mv_lumped, ne, direct_inverse(A))(g),
                  std::invalid_argument);
}

TEST_CASE("production preconditioners")
{
  const Discretization disc = build_discretization(Domain::square, 3, true);
  const struct {
    ProblemKind problem;
    bool tri;
    PrecondKind kind;
  } cases[] = {
      {ProblemKind::curl_vlap, false, PrecondKind::diag_vlap},
      {ProblemKind::curl_vlap, true, PrecondKind::tri_vlap},
      {ProblemKind::div_vlap, false, PrecondKind::diag_vlap},
      {ProblemKind::div_vlap, true, PrecondKind::tri_vlap},
      {ProblemKind::maxwell, false, PrecondKind::diag_maxwell},
      {ProblemKind::maxwell, true, PrecondKind::tri_maxwell},
  };
  for (const auto& c : cases) {
    const BlockPreconditioner P = make_preconditioner(disc, 3, c.problem, c.tri, 2);
    const SaddleSystem sys = build_system(c.problem, disc, 3);
    CHECK(P.kind() == c.kind);
    CHECK(P.size() == sys.size());
    CHECK(P(Vec::Zero(P.size())).norm() == 0.0);
    CHECK(method_for(P.kind()) == (c.tri ? KrylovMethod::gmres : KrylovMethod::minres));

    const Vec r1 = random_vector(P.size(), 5), r2 = random_vector(P.size(), 6);
    CHECK((P(r1 + 3.0 * r2) - P(r1) - 3.0 * P(r2)).norm() <= 1e-12 * P(r1).norm());

    Vec out;
    P.as_operator()(r1, out);
    CHECK((out - P(r1)).norm() == 0.0);

    if (!c.tri) {
      // MINRES needs a symmetric positive definite preconditioner.
      const DenseMat D = dense_of(P);
      CHECK((D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * D.cwiseAbs().maxCoeff());
      CHECK(Eigen::SelfAdjointEigenSolver<DenseMat>(0.5 * (D + D.transpose()))
                .eigenvalues()
                .minCoeff()
            > 0.0);
    }
  }
}

TEST_CASE("preconditioned solves on a small level")
{
  const Discretization disc = build_discretization(Domain::crack, 4, true);
  for (ProblemKind p : {ProblemKind::curl_vlap, ProblemKind::div_vlap, ProblemKind::maxwell})
    for (bool tri : {false, true}) {
      const SaddleSystem sys = build_system(p, disc, 4);
      const BlockPreconditioner P = make_preconditioner(disc, 4, p, tri, 2);
      KrylovConfig c;
      c.method = method_for(P.kind());
      c.tol = 1e-8;
      const SolveResult r = solve(matrix_operator(sys.matrix), P.as_operator(), sys.rhs, c);
      CHECK(r.report.converged);
      CHECK(r.report.iterations < (tri ? 25 : 50));
      CHECK((sys.rhs - sys.matrix * r.x).norm() <= 1e-8 * sys.rhs.norm());
    }
}
