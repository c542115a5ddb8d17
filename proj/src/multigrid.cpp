#include "mixmg/multigrid.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mixmg {

namespace {

void check_pair(const MeshLevel& coarse, const MeshLevel& fine)
{
  if (!fine.parent || fine.parent->coarse_vertices != coarse.num_vertices()
      || fine.parent->coarse_edges != coarse.num_edges()
      || fine.parent->coarse_triangles != coarse.num_triangles()
      || fine.num_triangles() != 4 * coarse.num_triangles())
    throw std::invalid_argument("prolongation: levels are not a parent/child pair");
}

// Barycentric coordinates of fine vertex v with respect to coarse triangle T.
// Coarse vertices are unit vectors, edge midpoints have two entries 1/2.
std::array<double, 3> fine_vertex_barycentric(const MeshLevel& coarse, Index T, Index v)
{
  const auto& tri = coarse.triangles[static_cast<std::size_t>(T)];
  std::array<double, 3> lam{0.0, 0.0, 0.0};
  auto local = [&tri](Index w) {
    for (std::size_t k = 0; k < 3; ++k)
      if (tri[k] == w)
        return k;
    throw std::logic_error("prolongation: fine vertex is not in its parent triangle");
  };
  const Index nv = coarse.num_vertices();
  if (v < nv) {
    lam[local(v)] = 1.0;
  } else {
    const auto& e = coarse.edges[static_cast<std::size_t>(v - nv)];
    lam[local(e[0])] = 0.5;
    lam[local(e[1])] = 0.5;
  }
  return lam;
}

}  // namespace

SpMat prolongation(TransferSpace space, const MeshLevel& coarse, const MeshLevel& fine)
{
  check_pair(coarse, fine);
  std::vector<Triplet> t;
  const Index nv = coarse.num_vertices();

  switch (space) {
  case TransferSpace::vertex: {
    SpMat P(fine.num_vertices(), nv);
    for (Index v = 0; v < nv; ++v)
      t.emplace_back(static_cast<int>(v), static_cast<int>(v), 1.0);
    for (Index e = 0; e < coarse.num_edges(); ++e) {
      const auto& ce = coarse.edges[static_cast<std::size_t>(e)];
      t.emplace_back(static_cast<int>(nv + e), static_cast<int>(ce[0]), 0.5);
      t.emplace_back(static_cast<int>(nv + e), static_cast<int>(ce[1]), 0.5);
    }
    P.setFromTriplets(t.begin(), t.end());
    return P;
  }
  case TransferSpace::edge: {
    // Circulation of phi_{ij} along the segment P -> Q is
    // l_i(P) l_j(Q) - l_j(P) l_i(Q) (exact, the integrand is linear).
    SpMat P(fine.num_edges(), coarse.num_edges());
    for (Index e = 0; e < fine.num_edges(); ++e) {
      const auto& fe = fine.edges[static_cast<std::size_t>(e)];
      const Index T = fine.edge_triangles[static_cast<std::size_t>(e)][0] / 4;
      const auto a = fine_vertex_barycentric(coarse, T, fe[0]);
      const auto b = fine_vertex_barycentric(coarse, T, fe[1]);
      const auto& tri = coarse.triangles[static_cast<std::size_t>(T)];
      for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t k1 = (k + 1) % 3;
        // Global orientation of coarse local edge k.
        const bool forward = tri[k] < tri[k1];
        const std::size_t i = forward ? k : k1;
        const std::size_t j = forward ? k1 : k;
        const double w = a[i] * b[j] - a[j] * b[i];
        if (w != 0.0)
          t.emplace_back(static_cast<int>(e),
                         static_cast<int>(coarse.triangle_edges[static_cast<std::size_t>(T)][k]), w);
      }
    }
    P.setFromTriplets(t.begin(), t.end());
    return P;
  }
  case TransferSpace::p0: {
    SpMat P(fine.num_triangles(), coarse.num_triangles());
    for (Index f = 0; f < fine.num_triangles(); ++f)
      t.emplace_back(static_cast<int>(f), static_cast<int>(f / 4), 0.25);
    P.setFromTriplets(t.begin(), t.end());
    return P;
  }
  }
  throw std::invalid_argument("prolongation: unknown space");
}

std::vector<int> smoothing_schedule(int levels, int finest_steps)
{
  if (levels < 1 || finest_steps < 1)
    throw std::invalid_argument("smoothing_schedule: need levels >= 1 and mJ >= 1");
  std::vector<int> m(static_cast<std::size_t>(levels));
  for (int k = 1; k <= levels; ++k)
    m[static_cast<std::size_t>(k - 1)] =
        static_cast<int>(std::ceil(std::pow(1.5, levels - k) * finest_steps));
  return m;
}

Smoother::Smoother(const SpMat& A) : A_(&A), inv_diag_(A.rows())
{
  for (Index i = 0; i < A.rows(); ++i) {
    const double d = A.coeff(i, i);
    if (!(d > 0.0))
      throw std::invalid_argument("Gauss-Seidel: nonpositive diagonal at row " + std::to_string(i));
    inv_diag_[i] = 1.0 / d;
  }
}

void Smoother::sweep(Vec& x, const Vec& b, SweepDirection direction) const
{
  const SpMat& A = *A_;
  const auto* outer = A.outerIndexPtr();
  const auto* inner = A.innerIndexPtr();
  const double* val = A.valuePtr();
  const Index n = A.rows();
  auto relax = [&](Index i) {
    double r = b[i];
    for (auto p = outer[i]; p < outer[i + 1]; ++p)
      r -= val[p] * x[inner[p]];
    x[i] += r * inv_diag_[i];
  };
  if (direction == SweepDirection::forward)
    for (Index i = 0; i < n; ++i)
      relax(i);
  else
    for (Index i = n - 1; i >= 0; --i)
      relax(i);
}

void gauss_seidel_sweep(const SpMat& A, Vec& x, const Vec& b, SweepDirection direction)
{
  if (!A.isCompressed())
    throw std::invalid_argument("gauss_seidel_sweep: matrix must be compressed");
  Smoother(A).sweep(x, b, direction);
}

MGHierarchy::MGHierarchy(std::vector<SpMat> operators, std::vector<SpMat> prolongations,
                         std::vector<int> smoothing)
{
  const std::size_t J = operators.size();
  if (J == 0 || prolongations.size() != J || smoothing.size() != J)
    throw std::invalid_argument("MGHierarchy: inconsistent level data");
  levels_.resize(J);
  for (std::size_t k = 0; k < J; ++k) {
    Level& L = levels_[k];
    L.A = std::move(operators[k]);
    L.A.makeCompressed();
    L.steps = smoothing[k];
    if (k > 0) {
      L.P = std::move(prolongations[k]);
      if (L.P.rows() != L.A.rows() || L.P.cols() != levels_[k - 1].A.rows())
        throw std::invalid_argument("MGHierarchy: prolongation shape mismatch at level "
                                    + std::to_string(k + 1));
      L.R = L.P.transpose();
      L.smoother = std::make_unique<Smoother>(L.A);
    }
  }
  if (levels_[0].A.rows() > 0) {
    coarse_.compute(DenseMat(levels_[0].A));
    if (coarse_.info() != Eigen::Success)
      throw std::runtime_error("MGHierarchy: coarse matrix is not positive definite");
  }
}

Index MGHierarchy::size() const
{
  return levels_.back().A.rows();
}

void MGHierarchy::cycle(std::size_t k, const Vec& f, Vec& u) const
{
  const Level& L = levels_[k];
  if (k == 0) {
    u = L.A.rows() > 0 ? Vec(coarse_.solve(f)) : Vec();
    return;
  }
  u.setZero(L.A.rows());
  for (int s = 0; s < L.steps; ++s)
    L.smoother->sweep(u, f, SweepDirection::forward);
  const Vec r = f - L.A * u;
  const Vec rc = L.R * r;
  Vec ec;
  cycle(k - 1, rc, ec);
  u += L.P * ec;
  for (int s = 0; s < L.steps; ++s)
    L.smoother->sweep(u, f, SweepDirection::backward);
}

void MGHierarchy::apply(const Vec& r, Vec& e) const
{
  if (r.size() != size())
    throw std::invalid_argument("MGHierarchy::apply: dimension mismatch");
  cycle(levels_.size() - 1, r, e);
}

Vec MGHierarchy::operator()(const Vec& r) const
{
  Vec e;
  apply(r, e);
  return e;
}

void MGHierarchy::write_diagnostics(std::ostream& out) const
{
  out << "level,size,nnz,smoothing\n";
  for (std::size_t k = 0; k < levels_.size(); ++k)
    out << k + 1 << ',' << levels_[k].A.rows() << ',' << levels_[k].A.nonZeros() << ','
        << levels_[k].steps << '\n';
}

}  // namespace mixmg
