// lapcond: generate graphs, run solver benchmarks, print spectral tables.

#include "lapcond/benchmark.hpp"
#include "lapcond/generators.hpp"
#include "lapcond/laplacian.hpp"
#include "lapcond/matrix_market.hpp"
#include "lapcond/spectral.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>

using namespace lapcond;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LAPCOND_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("LAPCOND_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

MuRule parse_mu(const std::string& s) {
  if (s == "inv-sqrt-n") return {true, 0.0};
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error("--mu expects a number or inv-sqrt-n, got '" + s + "'");
  if (!(v > 0.0)) throw Error("--mu must be positive");
  if (v >= 1.0) std::cerr << "warning: mu >= 1 lies outside the analyzed range\n";
  return {false, v};
}

std::optional<int> parse_levels(const std::string& s) {
  if (s == "max") return std::nullopt;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1) throw Error("--levels expects a positive integer or max");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel expanded-Laplacian preconditioning toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  auto* gen = app.add_subcommand("gen", "write a generated graph as Matrix Market");
  std::string kind;
  int n = 0;
  int deg = 4;
  std::optional<double> beta;
  std::string out_path;
  gen->add_option("--kind", kind, "graph family")->required()->check(
      CLI::IsMember({"grid2d", "ring", "ws"}));
  gen->add_option("--n", n, "node count (a perfect square for grid2d)")->required();
  gen->add_option("--deg", deg, "mean degree for ring and ws");
  gen->add_option("--beta", beta, "rewiring probability for ws (default 1/sqrt(n))");
  gen->add_option("--seed", seed, "random seed (default $LAPCOND_SEED or 0)");
  gen->add_option("--out", out_path, "output .mtx path")->required();

  auto* bench = app.add_subcommand("bench", "solve the expanded system with FGMRES");
  std::string graph;
  std::string mu_text = "inv-sqrt-n";
  std::string levels_text = "max";
  std::vector<std::string> precond{"pegp"};
  double tol = 1e-8;
  std::string format = "json";
  std::string bench_out;
  bool bench_kappa = false;
  std::string msp_rule = "all";
  bench->add_option("--graph", graph, "path.mtx or grid2d:<n>, ring:<n>[:deg], ws:<n>[:deg[:beta]]")
      ->required();
  bench->add_option("--mu", mu_text, "<float> or inv-sqrt-n");
  bench->add_option("--levels", levels_text, "<int> or max");
  bench->add_option("--precond", precond, "comma-separated subset of pegp,msp,none")
      ->delimiter(',')
      ->check(CLI::IsMember({"pegp", "msp", "none"}));
  bench->add_option("--tol", tol, "relative residual tolerance");
  bench->add_option("--seed", seed, "random seed (default $LAPCOND_SEED or 0)");
  bench->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  bench->add_option("--out", bench_out, "output path (default stdout)");
  bench->add_flag("--dense-kappa", bench_kappa, "also compute kappa densely when n_tilde <= 4000");
  bench->add_option("--msp-inter-level", msp_rule, "MSP inter-level edges: all or base-parent")
      ->check(CLI::IsMember({"all", "base-parent"}));

  auto* analyze = app.add_subcommand("analyze", "spectral summary of the expanded pencil");
  std::string an_graph;
  std::string an_mu = "inv-sqrt-n";
  std::string an_levels = "max";
  bool dense_kappa = false;
  analyze->add_option("--graph", an_graph, "path.mtx or generator spec")->required();
  analyze->add_option("--mu", an_mu, "<float> or inv-sqrt-n");
  analyze->add_option("--levels", an_levels, "<int> or max");
  analyze->add_option("--seed", seed, "random seed (default $LAPCOND_SEED or 0)");
  analyze->add_flag("--dense-kappa", dense_kappa, "dense pencil instead of Lanczos");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      WeightedGraph g;
      if (kind == "grid2d") {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (side * side != n) throw Error("grid2d needs a perfect-square --n");
        g = gen_grid2d(side);
      } else if (kind == "ring") {
        g = gen_ring(n, deg);
      } else {
        g = gen_watts_strogatz(n, deg, beta.value_or(1.0 / std::sqrt(static_cast<double>(n))), seed);
      }
      write_mtx(g, out_path);
      std::cerr << "wrote " << g.num_nodes() << " nodes, " << g.num_edges() << " edges to "
                << out_path << '\n';
      return 0;
    }

    if (*bench) {
      BenchmarkCase c;
      c.id = graph;
      c.graph = graph;
      c.mu = parse_mu(mu_text);
      c.levels = parse_levels(levels_text);
      c.preconditioners.clear();
      for (const auto& p : precond) c.preconditioners.push_back(parse_preconditioner_kind(p));
      c.tol = tol;
      c.seed = seed;
      c.dense_kappa = bench_kappa;
      c.msp.inter_level = msp_rule == "all" ? InterLevelEdges::all : InterLevelEdges::base_parent;
      const auto rows = run_benchmark(c);
      int failed = 0;
      for (const auto& r : rows) {
        std::cerr << r.preconditioner << ": setup " << r.setup_time << " s";
        if (!r.error.empty()) {
          std::cerr << ", failed: " << r.error;
          ++failed;
        }
        std::cerr << '\n';
      }
      const auto fmt = format == "csv" ? OutputFormat::csv : OutputFormat::json;
      if (bench_out.empty()) {
        emit_results(rows, fmt, std::cout);
      } else {
        emit_results(rows, fmt, bench_out);
      }
      return failed ? 1 : 0;
    }

    if (*analyze) {
      const WeightedGraph g = load_graph(an_graph, seed);
      const auto h = build_hierarchy(g, {parse_levels(an_levels), seed, VisitOrder::random});
      const double mu = parse_mu(an_mu).resolve(g.num_nodes());
      const auto sys = expand_laplacian(build_laplacian(g), composite_prolongation(h, mu));
      const auto mode = dense_kappa ? PencilMode::dense : PencilMode::iterative;
      const auto spec = generalized_pencil(sys.L_expanded, sys.L_pegp, mode);
      std::cout << std::setprecision(6);
      std::cout << "n          " << sys.n() << '\n'
                << "n_tilde    " << sys.n_tilde() << '\n'
                << "levels     " << sys.num_levels() << '\n'
                << "mu         " << mu << '\n'
                << "pegp edges " << sys.pegp.num_edges() << '\n'
                << "neg edges  " << sys.negative.num_edges() << '\n'
                << "lambda_max " << spec.lambda_max << '\n'
                << "lambda_min " << spec.lambda_min_nonzero << '\n'
                << "kappa      " << spec.kappa << (spec.converged ? "" : " (bracket only)") << '\n';
      if (dense_kappa) {
        std::cout << "null_dim   " << spec.null_dim_A << '\n';
        const double rho = rho_estimate(sys);
        std::cout << "rho        " << rho << '\n';
        if (rho < 1.0) std::cout << "1/(1-rho)  " << 1.0 / (1.0 - rho) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
