#pragma once

#include "lapcond/expansion.hpp"
#include "lapcond/graph.hpp"
#include "lapcond/solver.hpp"
#include "lapcond/spectral.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lapcond {

/// `grid2d:<n>`, `ring:<n>[:<deg>]`, `ws:<n>[:<deg>[:<beta>]]` or a path to a
/// .mtx file. Grids take the node count, which must be a perfect square.
/// deg defaults to 4 and beta to 1/sqrt(n).
WeightedGraph load_graph(const std::string& spec, std::uint64_t seed);

struct BenchmarkCase {
  std::string id;
  std::string graph;  ///< see load_graph
  MuRule mu;
  std::optional<int> levels;  ///< nullopt: max
  std::vector<PreconditionerKind> preconditioners{PreconditionerKind::pegp};
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool dense_kappa = false;  ///< kappa of (L_expanded, L_p), only when n_tilde <= kDenseLimit
  MspOptions msp;
  int max_iter = 1000;
};

struct ResultRow {
  std::string case_id;
  int n = 0;
  int n_tilde = 0;
  int levels = 0;
  double mu = 0.0;
  std::string preconditioner;
  int steps = 0;
  double time = 0.0;        ///< solve loop only
  double setup_time = 0.0;  ///< graph, hierarchy, expansion and factorization
  std::optional<double> kappa;
  bool converged = false;
  std::string error;  ///< non-empty for a failed row
};

/// b = [1, ..., 1, 1-n]
std::vector<double> benchmark_rhs(int n);

/// One row per requested preconditioner. Failures become rows with `error`
/// set instead of exceptions.
std::vector<ResultRow> run_benchmark(const BenchmarkCase& c);

enum class OutputFormat { json, csv };

/// Columns: case, n, n_tilde, levels, mu, preconditioner, steps, time, kappa, converged.
void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out);
void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path);

}  // namespace lapcond
