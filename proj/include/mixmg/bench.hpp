#pragma once

#include "mixmg/krylov.hpp"
#include "mixmg/mesh.hpp"
#include "mixmg/problems.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mixmg {

/// One solved benchmark cell.
struct RunRecord {
  Domain domain = Domain::square;
  ProblemKind problem = ProblemKind::curl_vlap;
  bool triangular = false;
  int level = 0;
  double h = 0.0;
  Index dof = 0;
  int iterations = 0;
  /// Solve phase only, rounded to 2 significant digits.
  double seconds = 0.0;
  double final_relres = 0.0;
  bool converged = false;

  bool operator==(const RunRecord&) const = default;
};

struct BenchConfig {
  int mJ = 2;
  double tol = 1e-8;
  int restart = 20;
  int max_iterations = 1000;
};

struct BenchRequest {
  std::vector<Domain> domains;
  std::vector<ProblemKind> problems;
  /// false = diag, true = tri.
  std::vector<bool> preconds;
  int first_level = 1;
  int last_level = 1;
  BenchConfig config;
  /// Worker threads for independent cells.
  int jobs = 1;
};

/// Rounds to 2 significant digits (the value survives a %.2g round trip).
double round_seconds(double s);

/// Builds the preconditioner for one level of `disc` and solves once.
RunRecord run_cell(const Discretization& disc, ProblemKind problem, bool triangular, int level,
                   const BenchConfig& cfg);

/// Every (domain, problem, precond, level) cell, ordered by that key.
std::vector<RunRecord> run_bench(const BenchRequest& req);

void emit_csv(std::ostream& out, const std::vector<RunRecord>& records);
/// One table per (domain, problem) with columns
/// h | Dof | Iteration (D) | Time | Iteration (T) | Time.
void emit_markdown(std::ostream& out, const std::vector<RunRecord>& records);
/// Inverse of emit_csv. Throws std::invalid_argument on malformed input.
std::vector<RunRecord> parse_csv(std::istream& in);

/// "1/32" for powers of two, decimal otherwise.
std::string format_h(double h);

}  // namespace mixmg
