#include "mixmg/bench.hpp"

#include "mixmg/precond.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace mixmg {

namespace {

std::string format_g(const char* spec, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

const char* precond_name(bool triangular)
{
  return triangular ? "tri" : "diag";
}

std::vector<std::string> split_fields(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string field;
  while (std::getline(s, field, ','))
    out.push_back(field);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

bool parse_bool(const std::string& s)
{
  if (s == "true")
    return true;
  if (s == "false")
    return false;
  throw std::invalid_argument("parse_csv: bad boolean '" + s + "'");
}

constexpr const char* kHeader =
    "domain,problem,precond,level,h,dof,iterations,seconds,final_relres,converged";

}  // namespace

double round_seconds(double s)
{
  return std::stod(format_g("%.2g", s));
}

std::string format_h(double h)
{
  if (h > 0.0) {
    const double inv = 1.0 / h;
    const double r = std::round(inv);
    if (r >= 1.0 && std::abs(inv - r) < 1e-9 && std::exp2(std::round(std::log2(r))) == r)
      return "1/" + std::to_string(static_cast<long long>(r));
  }
  return format_g("%g", h);
}

RunRecord run_cell(const Discretization& disc, ProblemKind problem, bool triangular, int level,
                   const BenchConfig& cfg)
{
  const SaddleSystem sys = build_system(problem, disc, level);
  const BlockPreconditioner P = make_preconditioner(disc, level, problem, triangular, cfg.mJ);
  KrylovConfig kc;
  kc.method = method_for(P.kind());
  kc.tol = cfg.tol;
  kc.restart = cfg.restart;
  kc.max_iterations = cfg.max_iterations;
  const SolveResult res = solve(matrix_operator(sys.matrix), P.as_operator(), sys.rhs, kc);

  RunRecord r;
  r.domain = disc.mesh(1).domain;
  r.problem = problem;
  r.triangular = triangular;
  r.level = level;
  r.h = sys.h;
  r.dof = sys.full_dofs;
  r.iterations = res.report.iterations;
  r.seconds = round_seconds(res.report.seconds);
  r.final_relres = res.report.relative_residual;
  r.converged = res.report.converged;
  return r;
}

std::vector<RunRecord> run_bench(const BenchRequest& req)
{
  if (req.first_level < 1 || req.last_level < req.first_level)
    throw std::invalid_argument("run_bench: bad level range");
  std::vector<Domain> domains = req.domains;
  std::vector<ProblemKind> problems = req.problems;
  std::vector<bool> preconds = req.preconds;
  std::sort(domains.begin(), domains.end());
  domains.erase(std::unique(domains.begin(), domains.end()), domains.end());
  std::sort(problems.begin(), problems.end());
  problems.erase(std::unique(problems.begin(), problems.end()), problems.end());
  std::sort(preconds.begin(), preconds.end());
  preconds.erase(std::unique(preconds.begin(), preconds.end()), preconds.end());

  const bool rotated = std::find(problems.begin(), problems.end(), ProblemKind::div_vlap)
                       != problems.end();
  std::vector<RunRecord> records;
  for (Domain d : domains) {
    const Discretization disc = build_discretization(d, req.last_level, rotated);
    struct Cell {
      ProblemKind problem;
      bool triangular;
      int level;
    };
    std::vector<Cell> cells;
    for (ProblemKind p : problems)
      for (bool t : preconds)
        for (int k = req.first_level; k <= req.last_level; ++k)
          cells.push_back({p, t, k});
    std::vector<RunRecord> out(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < cells.size(); i = next++)
        out[i] = run_cell(disc, cells[i].problem, cells[i].triangular, cells[i].level, req.config);
    };
    const int jobs = std::max(1, std::min<int>(req.jobs, static_cast<int>(cells.size())));
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j)
        pool.emplace_back(worker);
      for (auto& t : pool)
        t.join();
    }
    records.insert(records.end(), out.begin(), out.end());
  }
  return records;
}

void emit_csv(std::ostream& out, const std::vector<RunRecord>& records)
{
  out << kHeader << '\n';
  for (const RunRecord& r : records)
    out << to_string(r.domain) << ',' << to_string(r.problem) << ',' << precond_name(r.triangular)
        << ',' << r.level << ',' << format_g("%.17g", r.h) << ',' << r.dof << ',' << r.iterations
        << ',' << format_g("%.2g", r.seconds) << ',' << format_g("%.17g", r.final_relres) << ','
        << (r.converged ? "true" : "false") << '\n';
}

std::vector<RunRecord> parse_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw std::invalid_argument("parse_csv: missing or wrong header");
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto f = split_fields(line);
    if (f.size() != 10)
      throw std::invalid_argument("parse_csv: expected 10 fields in '" + line + "'");
    RunRecord r;
    try {
      r.domain = parse_domain(f[0]);
      r.problem = parse_problem(f[1]);
      if (f[2] != "diag" && f[2] != "tri")
        throw std::invalid_argument("bad precond '" + f[2] + "'");
      r.triangular = f[2] == "tri";
      r.level = std::stoi(f[3]);
      r.h = std::stod(f[4]);
      r.dof = std::stoll(f[5]);
      r.iterations = std::stoi(f[6]);
      r.seconds = std::stod(f[7]);
      r.final_relres = std::stod(f[8]);
      r.converged = parse_bool(f[9]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("parse_csv: ") + e.what());
    } catch (const std::out_of_range& e) {
      throw std::invalid_argument(std::string("parse_csv: ") + e.what());
    }
    records.push_back(r);
  }
  return records;
}

void emit_markdown(std::ostream& out, const std::vector<RunRecord>& records)
{
  using Key = std::tuple<Domain, ProblemKind>;
  std::map<Key, std::map<int, std::pair<const RunRecord*, const RunRecord*>>> groups;
  for (const RunRecord& r : records) {
    auto& slot = groups[{r.domain, r.problem}][r.level];
    (r.triangular ? slot.second : slot.first) = &r;
  }
  auto cell = [](const RunRecord* r, bool time) {
    if (!r)
      return std::string("-");
    return time ? format_g("%.2g", r->seconds) : std::to_string(r->iterations);
  };
  const bool captions = groups.size() > 1;
  bool first = true;
  if (groups.empty())
    groups[{Domain::square, ProblemKind::curl_vlap}];
  for (const auto& [key, rows] : groups) {
    if (!first)
      out << '\n';
    first = false;
    if (captions)
      out << "**" << to_string(std::get<0>(key)) << ", " << to_string(std::get<1>(key))
          << "**\n\n";
    out << "| h | Dof | Iteration (D) | Time | Iteration (T) | Time |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& [level, pair] : rows) {
      const RunRecord* any = pair.first ? pair.first : pair.second;
      out << "| " << format_h(any->h) << " | " << any->dof << " | " << cell(pair.first, false)
          << " | " << cell(pair.first, true) << " | " << cell(pair.second, false) << " | "
          << cell(pair.second, true) << " |\n";
    }
  }
}

}  // namespace mixmg
