#include "lapcond/benchmark.hpp"

#include "lapcond/generators.hpp"
#include "lapcond/laplacian.hpp"
#include "lapcond/matrix_market.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lapcond {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error("bad " + what + " '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error("bad " + what + " '" + s + "'");
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

WeightedGraph load_graph(const std::string& spec, std::uint64_t seed) {
  const auto parts = split(spec, ':');
  if (parts.size() >= 2 && (parts[0] == "grid2d" || parts[0] == "ring" || parts[0] == "ws")) {
    const int n = parse_int(parts[1], "node count");
    if (parts[0] == "grid2d") {
      if (parts.size() != 2) throw Error("grid2d spec takes only a node count");
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
      if (side * side != n) throw Error("grid2d node count must be a perfect square, got " + parts[1]);
      return gen_grid2d(side);
    }
    const int deg = parts.size() > 2 ? parse_int(parts[2], "degree") : 4;
    if (parts[0] == "ring") {
      if (parts.size() > 3) throw Error("ring spec is ring:<n>[:<deg>]");
      return gen_ring(n, deg);
    }
    if (parts.size() > 4) throw Error("ws spec is ws:<n>[:<deg>[:<beta>]]");
    const double beta = parts.size() > 3 ? parse_double(parts[3], "beta")
                                         : 1.0 / std::sqrt(static_cast<double>(n));
    return gen_watts_strogatz(n, deg, beta, seed);
  }
  return ingest_mtx(spec);
}

std::vector<double> benchmark_rhs(int n) {
  std::vector<double> b(n, 1.0);
  if (n > 0) b[n - 1] = 1.0 - n;
  return b;
}

std::vector<ResultRow> run_benchmark(const BenchmarkCase& c) {
  std::vector<ResultRow> rows;
  auto fail_all = [&](const std::string& what) {
    for (auto kind : c.preconditioners) {
      ResultRow row;
      row.case_id = c.id;
      row.preconditioner = to_string(kind);
      row.error = what;
      rows.push_back(row);
    }
    return rows;
  };
  if (!(c.tol > 0.0 && c.tol < 1.0)) return fail_all("tolerance must lie in (0,1)");

  const auto t0 = std::chrono::steady_clock::now();
  WeightedGraph g;
  AggregationHierarchy h;
  std::optional<ExpandedSystem> sys;
  try {
    g = load_graph(c.graph, c.seed);
    h = build_hierarchy(g, {c.levels, c.seed, VisitOrder::random});
    const double mu = c.mu.resolve(g.num_nodes());
    sys.emplace(expand_laplacian(build_laplacian(g), composite_prolongation(h, mu)));
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }
  const double shared_setup = seconds_since(t0);
  const auto bt = project_rhs(sys->prolongation, benchmark_rhs(g.num_nodes()));

  for (auto kind : c.preconditioners) {
    ResultRow row;
    row.case_id = c.id;
    row.n = g.num_nodes();
    row.n_tilde = sys->n_tilde();
    row.levels = h.num_levels();
    row.mu = sys->mu;
    row.preconditioner = to_string(kind);
    try {
      const auto t1 = std::chrono::steady_clock::now();
      Preconditioner pc;
      SparseMatrix lp;
      if (kind == PreconditionerKind::pegp) {
        lp = sys->L_pegp;
        pc = build_preconditioner(lp, kind);
      } else if (kind == PreconditionerKind::msp) {
        const auto msp = extract_msp(*sys, h, c.msp);
        lp = build_laplacian(msp.graph);
        pc = build_preconditioner(lp, kind, msp_elimination_order(msp, *sys, h));
      } else if (kind != PreconditionerKind::none) {
        throw Error("benchmark supports pegp, msp and none");
      }
      row.setup_time = shared_setup + seconds_since(t1);
      FgmresOptions opts;
      opts.tol = c.tol;
      opts.max_iter = c.max_iter;
      const auto res = fgmres(sys->L_expanded, bt, &pc, opts);
      row.steps = res.report.iterations;
      row.time = res.report.wall_time;
      row.converged = res.report.converged;
      if (c.dense_kappa && kind != PreconditionerKind::none && row.n_tilde <= kDenseLimit)
        row.kappa = generalized_pencil(sys->L_expanded, lp, PencilMode::dense).kappa;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.converged = false;
    }
    rows.push_back(row);
  }
  return rows;
}

void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json o;
      o["case"] = r.case_id;
      o["n"] = r.n;
      o["n_tilde"] = r.n_tilde;
      o["levels"] = r.levels;
      o["mu"] = r.mu;
      o["preconditioner"] = r.preconditioner;
      o["steps"] = r.steps;
      o["time"] = r.time;
      o["kappa"] = r.kappa ? nlohmann::ordered_json(*r.kappa) : nlohmann::ordered_json(nullptr);
      o["converged"] = r.converged;
      arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
    return;
  }
  out << "case,n,n_tilde,levels,mu,preconditioner,steps,time,kappa,converged\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.case_id << ',' << r.n << ',' << r.n_tilde << ',' << r.levels << ',' << r.mu << ','
        << r.preconditioner << ',' << r.steps << ',' << r.time << ',';
    if (r.kappa) out << *r.kappa;
    out << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("emit_results: cannot open " + path + " for writing");
  emit_results(rows, format, out);
  if (!out) throw Error("emit_results: write to " + path + " failed");
}

}  // namespace lapcond
