#include "mixmg/complex.hpp"
#include "mixmg/multigrid.hpp"
#include "mixmg/precond.hpp"
#include "whitney_oracle.hpp"

#include <doctest.h>

#include <random>

using namespace mixmg;

namespace {

double barycentric(const MeshLevel& coarse, Index T, int k, Point x)
{
  const oracle::Elem e = oracle::element(coarse, T);
  return 1.0 + e.grad[k][0] * (x.x - e.x[k].x) + e.grad[k][1] * (x.y - e.x[k].y);
}

// Coarse hats evaluated at the fine vertices.
DenseMat vertex_prolongation_oracle(const MeshLevel& coarse, const MeshLevel& fine)
{
  DenseMat P = DenseMat::Zero(fine.num_vertices(), coarse.num_vertices());
  for (Index t = 0; t < fine.num_triangles(); ++t) {
    const Index T = t / 4;
    for (Index v : fine.triangles[static_cast<std::size_t>(t)])
      for (int k = 0; k < 3; ++k)
        P(v, coarse.triangles[static_cast<std::size_t>(T)][k]) =
            barycentric(coarse, T, k, fine.vertices[static_cast<std::size_t>(v)]);
  }
  return P;
}

// Circulation of the coarse Whitney functions along each fine edge, by the
// midpoint rule (exact: the tangential component is linear along the edge).
DenseMat edge_prolongation_oracle(const MeshLevel& coarse, const MeshLevel& fine)
{
  DenseMat P = DenseMat::Zero(fine.num_edges(), coarse.num_edges());
  for (Index f = 0; f < fine.num_edges(); ++f) {
    const auto& fe = fine.edges[static_cast<std::size_t>(f)];
    const Point a = fine.vertices[static_cast<std::size_t>(fe[0])];
    const Point b = fine.vertices[static_cast<std::size_t>(fe[1])];
    const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Point tangent{b.x - a.x, b.y - a.y};
    const Index T = fine.edge_triangles[static_cast<std::size_t>(f)][0] / 4;
    std::array<double, 3> lam{};
    for (int k = 0; k < 3; ++k)
      lam[k] = barycentric(coarse, T, k, mid);
    for (Index E : coarse.triangle_edges[static_cast<std::size_t>(T)]) {
      const auto& ce = coarse.edges[static_cast<std::size_t>(E)];
      P(f, E) = oracle::dot(oracle::whitney(coarse, T, ce[0], ce[1], lam), tangent);
    }
  }
  return P;
}

double max_abs_dense(const DenseMat& A)
{
  return A.size() ? A.cwiseAbs().maxCoeff() : 0.0;
}

// Applies an operator to every unit vector.
DenseMat dense_of(const MGHierarchy& mg)
{
  const Index n = mg.size();
  DenseMat D(n, n);
  for (Index j = 0; j < n; ++j)
    D.col(j) = mg(Vec::Unit(n, j));
  return D;
}

// Extreme eigenvalues of MG A, through the symmetric form L^T MG L with A = L L^T.
std::pair<double, double> mg_spectrum(const MGHierarchy& mg)
{
  const DenseMat A = to_dense(mg.op(mg.num_levels()));
  const DenseMat L = A.llt().matrixL();
  const DenseMat K = L.transpose() * dense_of(mg) * L;
  const Eigen::SelfAdjointEigenSolver<DenseMat> es(0.5 * (K + K.transpose()));
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

TEST_CASE("Gauss-Seidel sweeps on a 2x2 system")
{
  SpMat A(2, 2);
  A.insert(0, 0) = 2.0;
  A.insert(0, 1) = -1.0;
  A.insert(1, 0) = -1.0;
  A.insert(1, 1) = 2.0;
  A.makeCompressed();
  const Vec b = (Vec(2) << 3.0, 0.0).finished();

  Vec x = Vec::Zero(2);
  gauss_seidel_sweep(A, x, b, SweepDirection::forward);
  CHECK(x[0] == 1.5);
  CHECK(x[1] == 0.75);

  Vec y = Vec::Zero(2);
  gauss_seidel_sweep(A, y, b, SweepDirection::backward);
  CHECK(y[1] == 0.0);
  CHECK(y[0] == 1.5);

  // The solution is a fixed point of both sweeps.
  const Vec s = (Vec(2) << 2.0, 1.0).finished();
  for (auto dir : {SweepDirection::forward, SweepDirection::backward}) {
    Vec z = s;
    gauss_seidel_sweep(A, z, b, dir);
    CHECK((z - s).norm() == 0.0);
  }

  SpMat Z(2, 2);
  Z.insert(0, 1) = 1.0;
  Z.insert(1, 0) = 1.0;
  Z.insert(1, 1) = 1.0;
  Z.makeCompressed();
  Vec w = Vec::Zero(2);
  CHECK_THROWS_AS(gauss_seidel_sweep(Z, w, b, SweepDirection::forward), std::invalid_argument);
}

TEST_CASE("smoothing schedule")
{
  CHECK(smoothing_schedule(5, 2) == std::vector<int>{11, 7, 5, 3, 2});
  CHECK(smoothing_schedule(1, 2) == std::vector<int>{2});
  CHECK(smoothing_schedule(3, 3) == std::vector<int>{7, 5, 3});
  CHECK_THROWS(smoothing_schedule(0, 2));
  CHECK_THROWS(smoothing_schedule(3, 0));
}

TEST_CASE("prolongations match the coarse basis evaluated on the fine mesh")
{
  for (Domain d : {Domain::square, Domain::lshape, Domain::crack}) {
    const MeshHierarchy H = build_hierarchy(d, 3);
    for (int k = 2; k <= 3; ++k) {
      const MeshLevel& c = H.level(k - 1);
      const MeshLevel& f = H.level(k);
      const DenseMat Pv = to_dense(prolongation(TransferSpace::vertex, c, f));
      const DenseMat Pe = to_dense(prolongation(TransferSpace::edge, c, f));
      CHECK(max_abs_dense(Pv - vertex_prolongation_oracle(c, f)) < 1e-14);
      CHECK(max_abs_dense(Pe - edge_prolongation_oracle(c, f)) < 1e-14);

      // Midpoints average their parents; halves inherit half the circulation.
      for (Index e = 0; e < c.num_edges(); ++e) {
        const auto& ce = c.edges[static_cast<std::size_t>(e)];
        CHECK(Pv(c.num_vertices() + e, ce[0]) == 0.5);
        CHECK(Pv(c.num_vertices() + e, ce[1]) == 0.5);
        for (Index half : f.parent->child_edges[static_cast<std::size_t>(e)])
          CHECK(std::abs(Pe(half, e)) == 0.5);
      }
    }
  }
}

TEST_CASE("prolongations commute with grad and curl")
{
  for (Domain d : {Domain::square, Domain::lshape, Domain::crack}) {
    const MeshHierarchy H = build_hierarchy(d, 4);
    for (int k = 2; k <= 4; ++k) {
      const MeshLevel& c = H.level(k - 1);
      const MeshLevel& f = H.level(k);
      const SpMat Pv = prolongation(TransferSpace::vertex, c, f);
      const SpMat Pe = prolongation(TransferSpace::edge, c, f);
      const SpMat P0 = prolongation(TransferSpace::p0, c, f);
      const SpMat Gc = differential_matrix(c, Differential::grad);
      const SpMat Gf = differential_matrix(f, Differential::grad);
      const SpMat Cc = differential_matrix(c, Differential::curl);
      const SpMat Cf = differential_matrix(f, Differential::curl);
      CHECK(max_abs(SpMat(Pe * Gc - Gf * Pv)) <= 1e-14);
      CHECK(max_abs(SpMat(Cf * Pe - P0 * Cc)) <= 1e-14);
    }
  }
}

TEST_CASE("prolongation rejects levels that are not a refinement pair")
{
  const MeshHierarchy H = build_hierarchy(Domain::square, 3);
  CHECK_THROWS_AS(prolongation(TransferSpace::vertex, H.level(1), H.level(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(prolongation(TransferSpace::edge, H.level(2), H.level(1)),
                  std::invalid_argument);
}

TEST_CASE("V-cycle with a single level is the exact inverse")
{
  const Discretization disc = build_discretization(Domain::square, 1);
  const auto mg = schur_vcycle(disc, 1, 2);
  const DenseMat A = to_dense(mg->op(1));
  CHECK(max_abs_dense(dense_of(*mg) * A - DenseMat::Identity(A.rows(), A.cols())) < 1e-12);
}

TEST_CASE("V-cycle is linear, symmetric and positive definite")
{
  for (Domain d : {Domain::square, Domain::lshape}) {
    const Discretization disc = build_discretization(d, 3);
    for (const auto& mg : {schur_vcycle(disc, 3, 2), poisson_vcycle(disc, 3, 2)}) {
      CHECK(mg->num_levels() == 3);
      CHECK(mg->smoothing(1) == 5);
      CHECK((*mg)(Vec::Zero(mg->size())).norm() == 0.0);
      const DenseMat D = dense_of(*mg);
      CHECK(max_abs_dense(D - D.transpose()) <= 1e-12 * max_abs_dense(D));
      CHECK(mg_spectrum(*mg).first > 0.0);

      std::mt19937_64 rng(3);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Vec r1(mg->size()), r2(mg->size());
      for (Index i = 0; i < r1.size(); ++i) {
        r1[i] = u(rng);
        r2[i] = u(rng);
      }
      const Vec lin = (*mg)(2.0 * r1 - r2) - (2.0 * (*mg)(r1) - (*mg)(r2));
      CHECK(lin.norm() <= 1e-12 * (*mg)(r1).norm());
    }
  }
}

TEST_CASE("V-cycle condition number stays bounded under refinement")
{
  const Discretization disc = build_discretization(Domain::square, 4);
  double previous = 0.0;
  for (int J = 2; J <= 4; ++J) {
    const auto [lo, hi] = mg_spectrum(*schur_vcycle(disc, J, 2));
    const double kappa = hi / lo;
    CHECK(kappa < 3.0);
    if (previous > 0.0)
      CHECK(kappa <= 1.1 * previous + 0.5);
    previous = kappa;
  }
}

TEST_CASE("MGHierarchy input validation")
{
  const Discretization disc = build_discretization(Domain::square, 2);
  const auto mg = schur_vcycle(disc, 2, 2);
  CHECK_THROWS_AS(mg->apply(Vec::Ones(3), *std::make_unique<Vec>()), std::invalid_argument);
  CHECK_THROWS_AS(MGHierarchy({mg->op(1), mg->op(2)}, {SpMat(), SpMat(2, 2)}, {2, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MGHierarchy({mg->op(1)}, {SpMat()}, {2, 2}), std::invalid_argument);
}
