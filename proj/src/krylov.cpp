#include "mixmg/krylov.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace mixmg {

LinearOperator matrix_operator(const SpMat& A)
{
  return [&A](const Vec& in, Vec& out) { out.noalias() = A * in; };
}

LinearOperator identity_operator()
{
  return [](const Vec& in, Vec& out) { out = in; };
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SolveResult minres(const LinearOperator& A, const LinearOperator& P, const Vec& b,
                   const KrylovConfig& cfg)
{
  if (!(cfg.tol > 0.0))
    throw std::invalid_argument("minres: tol must be positive");
  const auto start = Clock::now();
  const Index n = b.size();
  SolveResult out;
  out.x = Vec::Zero(n);
  SolveReport& rep = out.report;

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.seconds = elapsed(start);
    return out;
  }
  if (cfg.record_history)
    rep.residual_history.push_back(1.0);

  // Lanczos vectors v (unnormalized, scaled by gamma) and z = P v.
  Vec v_prev = Vec::Zero(n);
  Vec v = b;
  Vec z;
  P(v, z);
  double gamma2 = z.dot(v);
  if (gamma2 <= 0.0)
    throw IndefinitePreconditioner("minres: preconditioner is not positive definite");
  double gamma = std::sqrt(gamma2);
  double gamma_prev = 1.0;
  double eta = gamma;
  double s_prev = 0.0, s = 0.0, c_prev = 1.0, c = 1.0;

  Vec w_prev = Vec::Zero(n), w = Vec::Zero(n), w_next(n);
  Vec Aw_prev = Vec::Zero(n), Aw = Vec::Zero(n), Aw_next(n);
  Vec r = b;  // updated residual, b - A x
  Vec Az, v_next, z_next;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    z /= gamma;
    A(z, Az);
    const double delta = Az.dot(z);
    v_next = Az - (delta / gamma) * v - (gamma / gamma_prev) * v_prev;
    P(v_next, z_next);
    const double gamma_next2 = z_next.dot(v_next);
    const double tiny = 1e-14 * z_next.norm() * v_next.norm();
    if (gamma_next2 < -tiny)
      throw IndefinitePreconditioner("minres: preconditioner is not positive definite");
    const double gamma_next = gamma_next2 > tiny ? std::sqrt(gamma_next2) : 0.0;

    const double a0 = c * delta - c_prev * s * gamma;
    const double a1 = std::sqrt(a0 * a0 + gamma_next * gamma_next);
    const double a2 = s * delta + c_prev * c * gamma;
    const double a3 = s_prev * gamma;
    if (a1 == 0.0) {
      rep.iterations = it;
      rep.message = "minres: breakdown (singular tridiagonal)";
      break;
    }
    const double c_next = a0 / a1;
    const double s_next = gamma_next / a1;

    w_next = (z - a3 * w_prev - a2 * w) / a1;
    Aw_next = (Az - a3 * Aw_prev - a2 * Aw) / a1;
    out.x += (c_next * eta) * w_next;
    r -= (c_next * eta) * Aw_next;
    eta = -s_next * eta;

    rep.iterations = it;
    double rel = r.norm() / bnorm;
    if (rel <= cfg.tol || gamma_next == 0.0) {
      Vec Ax;
      A(out.x, Ax);
      r = b - Ax;
      rel = r.norm() / bnorm;
    }
    if (cfg.record_history) {
      rep.residual_history.push_back(rel);
      rep.preconditioned_history.push_back(std::abs(eta) / std::sqrt(gamma2));
    }
    rep.relative_residual = rel;
    if (rel <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (gamma_next == 0.0) {
      rep.message = "minres: Lanczos breakdown (zero beta) before convergence";
      break;
    }

    std::swap(v_prev, v);
    std::swap(v, v_next);
    std::swap(z, z_next);
    std::swap(w_prev, w);
    std::swap(w, w_next);
    std::swap(Aw_prev, Aw);
    std::swap(Aw, Aw_next);
    gamma_prev = gamma;
    gamma = gamma_next;
    s_prev = s;
    s = s_next;
    c_prev = c;
    c = c_next;
  }
  if (!rep.converged && rep.message.empty())
    rep.message = "minres: iteration limit reached";
  rep.seconds = elapsed(start);
  return out;
}

SolveResult gmres(const LinearOperator& A, const LinearOperator& P, const Vec& b,
                  const KrylovConfig& cfg)
{
  if (!(cfg.tol > 0.0))
    throw std::invalid_argument("gmres: tol must be positive");
  if (cfg.restart < 1)
    throw std::invalid_argument("gmres: restart must be at least 1");
  const auto start = Clock::now();
  const Index n = b.size();
  const int m = cfg.restart;
  SolveResult out;
  out.x = Vec::Zero(n);
  SolveReport& rep = out.report;

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.seconds = elapsed(start);
    return out;
  }
  if (cfg.record_history)
    rep.residual_history.push_back(1.0);

  std::vector<Vec> V(static_cast<std::size_t>(m + 1));
  std::vector<Vec> Z(static_cast<std::size_t>(m));
  DenseMat H = DenseMat::Zero(m + 1, m);
  Vec cs(m), sn(m), g(m + 1);
  Vec r = b;
  double rnorm = bnorm;
  Vec w;

  while (rep.iterations < cfg.max_iterations) {
    V[0] = r / rnorm;
    g.setZero();
    g[0] = rnorm;
    H.setZero();
    int j = 0;
    bool happy = false;
    for (; j < m && rep.iterations < cfg.max_iterations; ++j) {
      P(V[static_cast<std::size_t>(j)], Z[static_cast<std::size_t>(j)]);
      A(Z[static_cast<std::size_t>(j)], w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = w.dot(V[static_cast<std::size_t>(i)]);
        w -= H(i, j) * V[static_cast<std::size_t>(i)];
      }
      H(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      happy = H(j + 1, j) <= 1e-14 * denom;
      if (!happy)
        V[static_cast<std::size_t>(j + 1)] = w / H(j + 1, j);
      cs[j] = denom > 0.0 ? H(j, j) / denom : 1.0;
      sn[j] = denom > 0.0 ? H(j + 1, j) / denom : 0.0;
      H(j, j) = denom;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++rep.iterations;
      if (cfg.record_history)
        rep.residual_history.push_back(std::abs(g[j + 1]) / bnorm);
      if (std::abs(g[j + 1]) <= cfg.tol * bnorm || happy) {
        ++j;
        break;
      }
    }

    // x += Z y with H(0:j, 0:j) y = g(0:j).
    Vec y = g.head(j);
    for (int i = j - 1; i >= 0; --i) {
      for (int k = i + 1; k < j; ++k)
        y[i] -= H(i, k) * y[k];
      y[i] /= H(i, i);
    }
    for (int i = 0; i < j; ++i)
      out.x += y[i] * Z[static_cast<std::size_t>(i)];

    Vec Ax;
    A(out.x, Ax);
    r = b - Ax;
    const double previous = rnorm;
    rnorm = r.norm();
    rep.relative_residual = rnorm / bnorm;
    if (rep.relative_residual <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (rnorm >= previous * (1.0 - 1e-12)) {
      rep.message = "gmres: stagnation over a full restart cycle";
      break;
    }
  }
  if (!rep.converged && rep.message.empty())
    rep.message = "gmres: iteration limit reached";
  rep.seconds = elapsed(start);
  return out;
}

SolveResult solve(const LinearOperator& A, const LinearOperator& P, const Vec& b,
                  const KrylovConfig& cfg)
{
  return cfg.method == KrylovMethod::minres ? minres(A, P, b, cfg) : gmres(A, P, b, cfg);
}

}  // namespace mixmg
