// Command-line front end: benchmark tables, verification suites, dumps.

#include "mixmg/bench.hpp"
#include "mixmg/precond.hpp"
#include "mixmg/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace mixmg;

namespace {

constexpr int kExitGate = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& s)
{
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

std::pair<int, int> parse_levels(const std::string& s)
{
  try {
    const auto dots = s.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int k = std::stoi(s, &used);
      if (used != s.size())
        throw std::invalid_argument(s);
      return {k, k};
    }
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const int lo = std::stoi(a, &used);
    if (used != a.size())
      throw std::invalid_argument(s);
    const int hi = std::stoi(b, &used);
    if (used != b.size())
      throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--levels expects INT or INT..INT, got '" + s + "'");
  }
}

std::pair<int, int> checked_levels(const std::string& s)
{
  const auto [lo, hi] = parse_levels(s);
  if (lo < 1 || hi < lo || hi > 10)
    throw UsageError("--levels must satisfy 1 <= a <= b <= 10, got '" + s + "'");
  return {lo, hi};
}

std::vector<Domain> parse_domains(const std::string& s)
{
  std::vector<Domain> out;
  for (const auto& name : split_list(s)) {
    try {
      out.push_back(parse_domain(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty())
    throw UsageError("--domain is empty");
  return out;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path)
  {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw UsageError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct BenchArgs {
  std::string domain = "square";
  std::string levels = "5";
  std::string problem = "curl";
  std::string precond = "diag,tri";
  int mj = 2;
  double tol = 1e-8;
  int restart = 20;
  int maxit = 1000;
  int jobs = 1;
  std::string format = "csv";
  std::string out;
};

int run_bench_command(const BenchArgs& a)
{
  BenchRequest req;
  req.domains = parse_domains(a.domain);
  for (const auto& p : split_list(a.problem)) {
    try {
      req.problems.push_back(parse_problem(p));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& p : split_list(a.precond)) {
    if (p != "diag" && p != "tri")
      throw UsageError("--precond expects diag and/or tri, got '" + p + "'");
    req.preconds.push_back(p == "tri");
  }
  if (req.problems.empty() || req.preconds.empty())
    throw UsageError("--problem and --precond must not be empty");
  std::tie(req.first_level, req.last_level) = checked_levels(a.levels);
  if (a.mj < 1 || !(a.tol > 0.0) || a.restart < 1 || a.maxit < 1 || a.jobs < 1)
    throw UsageError("--mj, --tol, --restart, --maxit and --jobs must be positive");
  req.config = {a.mj, a.tol, a.restart, a.maxit};
  req.jobs = a.jobs;

  const auto records = run_bench(req);
  Output out(a.out);
  if (a.format == "md")
    emit_markdown(out.stream(), records);
  else
    emit_csv(out.stream(), records);
  for (const auto& r : records)
    if (!r.converged)
      return kExitGate;
  return 0;
}

struct VerifyArgs {
  std::string suite;
  std::string domain = "square";
  std::string levels = "2..4";
  std::uint64_t seed = 42;
  std::string out;
};

int run_verify_command(const VerifyArgs& a)
{
  std::vector<std::string> suites = split_list(a.suite);
  if (suites.empty())
    throw UsageError("--suite is empty; choose from: all, complex, commutator, hodge, poincare, "
                     "inverse, bab, infsup, multigrid, lumping, smoothing, saddle");
  if (suites.size() == 1 && suites[0] == "all")
    suites = suite_names();
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw UsageError("unknown suite '" + s + "'");
  const auto domains = parse_domains(a.domain);
  const auto [lo, hi] = checked_levels(a.levels);

  Output out(a.out);
  out.stream() << "check,domain,level,value,threshold,pass\n";
  bool pass = true;
  for (Domain d : domains)
    for (const auto& s : suites) {
      const CheckReport rep = run_suite(s, d, lo, hi, a.seed);
      write_report(out.stream(), rep, false);
      pass = pass && all_pass(rep);
    }
  return pass ? 0 : kExitGate;
}

int run_dump_mesh(const std::string& domain, int level, const std::string& path)
{
  if (level < 1 || level > 10)
    throw UsageError("--level must be in 1..10");
  const MeshHierarchy H = build_hierarchy(parse_domains(domain).at(0), level);
  Output out(path);
  write_mesh(out.stream(), H.finest());
  return 0;
}

int run_dump_matrix(const std::string& domain, int level, const std::string& name,
                    const std::string& path)
{
  if (level < 1 || level > 10)
    throw UsageError("--level must be in 1..10");
  const Discretization disc = build_discretization(parse_domains(domain).at(0), level, true);
  const DeRhamLevel& L = disc.complex(level);
  const MeshLevel& mesh = disc.mesh(level);
  SpMat A;
  if (name == "G") A = L.G;
  else if (name == "C") A = L.C;
  else if (name == "Mv") A = L.Mv;
  else if (name == "Me") A = L.Me;
  else if (name == "Mf") A = diagonal_matrix(L.Mf);
  else if (name == "Mv_lumped") A = diagonal_matrix(L.Mv_lumped);
  else if (name == "B") A = L.B;
  else if (name == "A") A = schur_lumped(L).matrix();
  else if (name == "Ap") A = L.B * L.G;
  else if (name == "curl") A = build_curl_saddle(mesh, L).matrix;
  else if (name == "div") A = build_div_saddle(mesh, L, disc.rotated_level(level)).matrix;
  else if (name == "maxwell") A = build_maxwell(mesh, L).matrix;
  else if (name == "Pv" || name == "Pe") {
    if (level < 2)
      throw UsageError("prolongations need --level >= 2");
    const auto i = static_cast<std::size_t>(level - 1);
    A = name == "Pv" ? disc.vertex_prolongation[i] : disc.edge_prolongation[i];
  } else
    throw UsageError("unknown matrix '" + name
                     + "'; choose G, C, Mv, Me, Mf, Mv_lumped, B, A, Ap, curl, div, maxwell, Pv, Pe");
  Output out(path);
  write_matrix(out.stream(), A);
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Mixed finite element vector Laplacian solvers with multigrid preconditioners"};
  app.require_subcommand(1);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Solve benchmark cells and print a table");
  b->add_option("--domain", bench.domain, "square, lshape, crack (comma list)");
  b->add_option("--levels", bench.levels, "Level J or range a..b (h = 2^-J)");
  b->add_option("--problem", bench.problem, "curl, div, maxwell (comma list)");
  b->add_option("--precond", bench.precond, "diag, tri (comma list)");
  b->add_option("--mj", bench.mj, "Smoothing steps on the finest level");
  b->add_option("--tol", bench.tol, "Relative residual tolerance");
  b->add_option("--restart", bench.restart, "GMRES restart length");
  b->add_option("--maxit", bench.maxit, "Iteration limit");
  b->add_option("--jobs", bench.jobs, "Worker threads");
  b->add_option("--format", bench.format, "csv or md")->check(CLI::IsMember({"csv", "md"}));
  b->add_option("--out", bench.out, "Output file (default stdout)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run verification suites; CSV report");
  v->add_option("--suite", verify.suite, "Suite list or 'all'")->required();
  v->add_option("--domain", verify.domain, "square, lshape, crack (comma list)");
  v->add_option("--levels", verify.levels, "Level range a..b");
  v->add_option("--seed", verify.seed, "Seed for random test vectors");
  v->add_option("--out", verify.out, "Output file (default stdout)");

  std::string mesh_domain = "square", mesh_out;
  int mesh_level = 1;
  auto* dm = app.add_subcommand("dump-mesh", "Write one mesh level");
  dm->add_option("--domain", mesh_domain);
  dm->add_option("--level", mesh_level);
  dm->add_option("--out", mesh_out);

  std::string mat_domain = "square", mat_name = "A", mat_out;
  int mat_level = 1;
  auto* dx = app.add_subcommand("dump-matrix", "Write one assembled matrix in coordinate form");
  dx->add_option("--domain", mat_domain);
  dx->add_option("--level", mat_level);
  dx->add_option("--matrix", mat_name, "Matrix name");
  dx->add_option("--out", mat_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (b->parsed())
      return run_bench_command(bench);
    if (v->parsed())
      return run_verify_command(verify);
    if (dm->parsed())
      return run_dump_mesh(mesh_domain, mesh_level, mesh_out);
    if (dx->parsed())
      return run_dump_matrix(mat_domain, mat_level, mat_name, mat_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGate;
  }
  return kExitUsage;
}
