#include "mixmg/precond.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>

namespace mixmg {

namespace {

std::shared_ptr<const MGHierarchy> build_vcycle(std::vector<SpMat> ops,
                                                const std::vector<SpMat>& prolongations,
                                                int finest, int mJ)
{
  std::vector<SpMat> P(prolongations.begin(), prolongations.begin() + finest);
  return std::make_shared<const MGHierarchy>(std::move(ops), std::move(P),
                                             smoothing_schedule(finest, mJ));
}

void check_level(const Discretization& disc, int finest)
{
  if (finest < 1 || finest > disc.num_levels())
    throw std::invalid_argument("vcycle: level " + std::to_string(finest) + " out of range");
}

}  // namespace

std::shared_ptr<const MGHierarchy> schur_vcycle(const Discretization& disc, int finest, int mJ)
{
  check_level(disc, finest);
  std::vector<SpMat> ops;
  for (int k = 1; k <= finest; ++k)
    ops.push_back(schur_lumped(disc.complex(k)).matrix());
  return build_vcycle(std::move(ops), disc.edge_prolongation, finest, mJ);
}

std::shared_ptr<const MGHierarchy> rotated_schur_vcycle(const Discretization& disc, int finest,
                                                        int mJ)
{
  check_level(disc, finest);
  if (disc.rotated.empty())
    throw std::logic_error("rotated_schur_vcycle: discretization has no rotated complex");
  std::vector<SpMat> ops;
  for (int k = 1; k <= finest; ++k)
    ops.push_back(schur_rotated(disc.rotated_level(k)));
  return build_vcycle(std::move(ops), disc.flux_prolongation, finest, mJ);
}

std::shared_ptr<const MGHierarchy> poisson_vcycle(const Discretization& disc, int finest, int mJ)
{
  check_level(disc, finest);
  std::vector<SpMat> ops;
  for (int k = 1; k <= finest; ++k) {
    const DeRhamLevel& L = disc.complex(k);
    ops.push_back(SpMat(L.B * L.G));
  }
  return build_vcycle(std::move(ops), disc.vertex_prolongation, finest, mJ);
}

LinearOperator vcycle_operator(std::shared_ptr<const MGHierarchy> mg)
{
  return [mg = std::move(mg)](const Vec& r, Vec& e) { mg->apply(r, e); };
}

LinearOperator direct_inverse(const SpMat& A)
{
  using Solver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;
  auto solver = std::make_shared<Solver>(Eigen::SparseMatrix<double>(A));
  if (solver->info() != Eigen::Success)
    throw std::runtime_error("direct_inverse: factorization failed");
  return [solver](const Vec& r, Vec& x) { x = solver->solve(r); };
}

BlockPreconditioner BlockPreconditioner::diag_vlap(Vec Mv_lumped, Index edge_size,
                                                   LinearOperator schur_inverse)
{
  if (edge_size < 1)
    throw std::invalid_argument("diag preconditioner: edge block size must be positive");
  auto d = std::make_shared<Data>();
  d->Mv_inv = Mv_lumped.cwiseInverse();
  d->edge_size = edge_size;
  d->schur = std::move(schur_inverse);
  BlockPreconditioner p;
  p.kind_ = PrecondKind::diag_vlap;
  p.data_ = std::move(d);
  return p;
}

BlockPreconditioner BlockPreconditioner::tri_vlap(Vec Mv_lumped, SpMat B,
                                                  LinearOperator schur_inverse)
{
  auto d = std::make_shared<Data>();
  d->Mv_inv = Mv_lumped.cwiseInverse();
  d->Bt = B.transpose();
  d->B = std::move(B);
  d->edge_size = d->B.cols();
  d->schur = std::move(schur_inverse);
  BlockPreconditioner p;
  p.kind_ = PrecondKind::tri_vlap;
  p.data_ = std::move(d);
  return p;
}

BlockPreconditioner BlockPreconditioner::diag_maxwell(Vec Mv_lumped, Index edge_size,
                                                      LinearOperator schur_inverse)
{
  BlockPreconditioner p = diag_vlap(std::move(Mv_lumped), edge_size, std::move(schur_inverse));
  p.kind_ = PrecondKind::diag_maxwell;
  return p;
}

BlockPreconditioner BlockPreconditioner::tri_maxwell(Vec Mv_lumped, SpMat B, SpMat G, SpMat Ap,
                                                     LinearOperator schur_inverse,
                                                     LinearOperator poisson_inverse)
{
  auto d = std::make_shared<Data>();
  d->Mv_inv = Mv_lumped.cwiseInverse();
  d->B = std::move(B);
  d->G = std::move(G);
  d->Ap = std::move(Ap);
  d->edge_size = d->B.cols();
  d->schur = std::move(schur_inverse);
  d->poisson = std::move(poisson_inverse);
  BlockPreconditioner p;
  p.kind_ = PrecondKind::tri_maxwell;
  p.data_ = std::move(d);
  return p;
}

Index BlockPreconditioner::size() const
{
  return data_->Mv_inv.size() + data_->edge_size;
}

void BlockPreconditioner::apply(const Vec& r, Vec& out) const
{
  const Data& d = *data_;
  const Index nv = d.Mv_inv.size();
  const Index ne = r.size() - nv;
  if (ne != d.edge_size)
    throw std::invalid_argument("BlockPreconditioner::apply: dimension mismatch");
  out.resize(r.size());
  Vec y1, y2;
  switch (kind_) {
  case PrecondKind::diag_vlap: {
    out.head(nv) = d.Mv_inv.cwiseProduct(r.head(nv));
    d.schur(r.tail(ne), y2);
    out.tail(ne) = y2;
    return;
  }
  case PrecondKind::tri_vlap: {
    y1 = -d.Mv_inv.cwiseProduct(r.head(nv));
    const Vec f = r.tail(ne) - d.Bt * y1;
    d.schur(f, y2);
    out.head(nv) = y1 + d.Mv_inv.cwiseProduct(d.B * y2);
    out.tail(ne) = y2;
    return;
  }
  case PrecondKind::diag_maxwell: {
    d.schur(r.head(ne), y1);
    out.head(ne) = y1;
    out.tail(nv) = d.Mv_inv.cwiseProduct(r.tail(nv));
    return;
  }
  case PrecondKind::tri_maxwell: {
    d.schur(r.head(ne), y1);
    const Vec g = r.tail(nv) - d.B * y1;
    d.poisson(g, y2);
    out.head(ne) = y1 + d.G * y2;
    out.tail(nv) = -d.Mv_inv.cwiseProduct(d.Ap * y2);
    return;
  }
  }
}

Vec BlockPreconditioner::operator()(const Vec& r) const
{
  Vec out;
  apply(r, out);
  return out;
}

LinearOperator BlockPreconditioner::as_operator() const
{
  return [p = *this](const Vec& r, Vec& out) { p.apply(r, out); };
}

BlockPreconditioner make_preconditioner(const Discretization& disc, int level,
                                        ProblemKind problem, bool triangular, int mJ)
{
  const DeRhamLevel& L = disc.complex(level);
  switch (problem) {
  case ProblemKind::curl_vlap: {
    auto S = vcycle_operator(schur_vcycle(disc, level, mJ));
    return triangular ? BlockPreconditioner::tri_vlap(L.Mv_lumped, L.B, std::move(S))
                      : BlockPreconditioner::diag_vlap(L.Mv_lumped, L.B.cols(), std::move(S));
  }
  case ProblemKind::div_vlap: {
    const RotatedLevel& R = disc.rotated_level(level);
    auto S = vcycle_operator(rotated_schur_vcycle(disc, level, mJ));
    return triangular ? BlockPreconditioner::tri_vlap(R.Mv_lumped, R.coupling, std::move(S))
                      : BlockPreconditioner::diag_vlap(R.Mv_lumped, R.coupling.cols(),
                                                       std::move(S));
  }
  case ProblemKind::maxwell: {
    auto S = vcycle_operator(schur_vcycle(disc, level, mJ));
    if (!triangular)
      return BlockPreconditioner::diag_maxwell(L.Mv_lumped, L.B.cols(), std::move(S));
    auto Sp = vcycle_operator(poisson_vcycle(disc, level, mJ));
    return BlockPreconditioner::tri_maxwell(L.Mv_lumped, L.B, L.G, SpMat(L.B * L.G),
                                            std::move(S), std::move(Sp));
  }
  }
  throw std::invalid_argument("make_preconditioner: unknown problem");
}

KrylovMethod method_for(PrecondKind kind)
{
  return kind == PrecondKind::diag_vlap || kind == PrecondKind::diag_maxwell
             ? KrylovMethod::minres
             : KrylovMethod::gmres;
}

}  // namespace mixmg
