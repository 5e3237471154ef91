#include "doctest.h"

#include "../support/fixtures.hpp"

#include "lapcond/expansion.hpp"
#include "lapcond/generators.hpp"
#include "lapcond/laplacian.hpp"
#include "lapcond/ldl.hpp"
#include "lapcond/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

using namespace lapcond;

namespace {

// Children before parents: reversed BFS order from node 0.
std::vector<int> leaves_first(const WeightedGraph& tree) {
  std::vector<int> bfs{0};
  std::vector<char> seen(tree.num_nodes(), 0);
  seen[0] = 1;
  for (std::size_t k = 0; k < bfs.size(); ++k)
    for (const auto& nb : tree.neighbors(bfs[k]))
      if (!seen[nb.node]) {
        seen[nb.node] = 1;
        bfs.push_back(nb.node);
      }
  std::reverse(bfs.begin(), bfs.end());
  return bfs;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("K2 preconditioner grounds to a 1x1 factor") {
  const auto l = build_laplacian(WeightedGraph(2, {{0, 1, 1.0}}));
  const auto p = build_preconditioner(l, PreconditionerKind::pegp);
  REQUIRE(p.factorization() != nullptr);
  CHECK(p.factorization()->size() == 1);
  CHECK(p.factorization()->pivots()[0] == 1.0);
  CHECK(p.fill_in_count() == 0);
  const auto z = p.apply(std::vector<double>{1.0, -1.0});
  CHECK(z[0] == doctest::Approx(0.5));
  CHECK(z[1] == doctest::Approx(-0.5));
}

TEST_CASE("trees factor without fill under leaf-first elimination") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto tree = fixtures::random_tree(40, rng);
    const auto p = build_preconditioner(build_laplacian(tree), PreconditionerKind::custom,
                                        leaves_first(tree));
    CHECK(p.fill_in_count() == 0);
  }
}

TEST_CASE("sparse LDL solves match a dense solve") {
  std::mt19937_64 rng(2);
  const auto g = fixtures::random_connected_graph(30, 40, rng);
  // Add a diagonal shift so the matrix is definite without grounding.
  const auto a = add(build_laplacian(g), SparseMatrix::identity(30), 1.0, 0.5);
  std::vector<int> order(30);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const SparseLdl f(a, order);
  std::vector<double> b(30);
  std::normal_distribution<double> nd;
  for (auto& v : b) v = nd(rng);
  const Eigen::VectorXd want = a.to_dense().llt().solve(fixtures::to_eigen(b));
  f.solve(b);
  for (int i = 0; i < 30; ++i) CHECK(b[i] == doctest::Approx(want(i)).epsilon(1e-12));

  // Fill accounting against a dense symbolic elimination.
  Eigen::MatrixXi pat = Eigen::MatrixXi::Zero(30, 30);
  const Eigen::MatrixXd ad = a.to_dense();
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) pat(i, j) = ad(order[i], order[j]) != 0.0;
  std::size_t fill = 0;
  for (int k = 0; k < 30; ++k)
    for (int i = k + 1; i < 30; ++i) {
      if (!pat(i, k)) continue;
      for (int j = k + 1; j < 30; ++j)
        if (pat(j, k) && !pat(i, j)) {
          pat(i, j) = pat(j, i) = 2;
        }
    }
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < i; ++j) fill += pat(i, j) == 2;
  CHECK(f.fill_in() == fill);
}

TEST_CASE("minimum degree order is a permutation") {
  auto perm = minimum_degree_order(build_laplacian(gen_grid2d(6)));
  std::sort(perm.begin(), perm.end());
  for (int i = 0; i < 36; ++i) CHECK(perm[i] == i);
}

TEST_CASE("LDL rejects an indefinite matrix") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 1;
  CHECK_THROWS_AS(SparseLdl(SparseMatrix::from_dense(a, true), {0, 1}), Error);
}

TEST_CASE("preconditioner application on an expanded grid") {
  const auto g = gen_grid2d(6);
  const auto h = build_hierarchy(g, {std::nullopt, 1});
  const auto sys = expand_laplacian(build_laplacian(g), composite_prolongation(h, 1.0 / 6));
  const auto msp = extract_msp(sys, h);
  const int n = sys.n_tilde();
  std::vector<Preconditioner> pre;
  pre.push_back(build_preconditioner(sys.L_pegp, PreconditionerKind::pegp));
  pre.push_back(build_preconditioner(build_laplacian(msp.graph), PreconditionerKind::msp,
                                     msp_elimination_order(msp, sys, h)));
  std::mt19937_64 rng(6);
  for (const auto& p : pre) {
    CAPTURE(to_string(p.kind()));
    // Ones map to zero.
    for (double v : p.apply(std::vector<double>(n, 1.0))) CHECK(std::abs(v) < 1e-12);
    // Round trip on 1-perp.
    const auto y = fixtures::random_perp_ones(n, rng);
    const auto z = p.apply(p.matrix() * y);
    for (int i = 0; i < n; ++i) CHECK(std::abs(z[i] - y[i]) <= 1e-10);
    // Symmetric on 1-perp.
    const auto r1 = fixtures::random_perp_ones(n, rng), r2 = fixtures::random_perp_ones(n, rng);
    CHECK(std::abs(dot(p.apply(r1), r2) - dot(r1, p.apply(r2))) <= 1e-10);
    CHECK(std::abs(sum(p.apply(r1))) < 1e-10);
  }
}

TEST_CASE("preconditioner on the worked example right-hand side") {
  const auto h = fixtures::eight_node_hierarchy();
  const auto sys = expand_laplacian(build_laplacian(h.graphs[0]), composite_prolongation(h, 0.5));
  std::vector<double> b(8, 1.0);
  b[7] = -7.0;
  const auto bt = project_rhs(sys.prolongation, b);
  const auto p = build_preconditioner(sys.L_pegp, PreconditionerKind::pegp);
  const auto z = p.apply(bt);
  for (double v : z) CHECK(std::isfinite(v));
  CHECK(std::abs(sum(z)) < 1e-12);
}

TEST_CASE("preconditioner input validation") {
  CHECK_THROWS_AS(build_preconditioner(build_laplacian(WeightedGraph(3, {{0, 1, 1.0}})),
                                       PreconditionerKind::pegp),
                  Error);
  CHECK_THROWS_AS(build_preconditioner(build_laplacian(WeightedGraph(2, {{0, 1, -1.0}})),
                                       PreconditionerKind::pegp),
                  Error);
  const auto l = build_laplacian(gen_grid2d(3));
  CHECK_THROWS_AS(build_preconditioner(l, PreconditionerKind::msp), Error);
  CHECK_THROWS_AS(build_preconditioner(l, PreconditionerKind::custom, std::vector<int>{0, 1}), Error);
  CHECK(parse_preconditioner_kind("msp") == PreconditionerKind::msp);
  CHECK_THROWS_AS(parse_preconditioner_kind("cmg"), Error);
}

TEST_CASE("fgmres on the identity takes one step") {
  const auto a = SparseMatrix::identity(5);
  const std::vector<double> b{1, 2, 3, 4, 5};
  const auto r = fgmres(a, b, nullptr, {1e-10, 100, 0, false});
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 1);
  for (int i = 0; i < 5; ++i) CHECK(r.x[i] == doctest::Approx(b[i]));
}

TEST_CASE("fgmres: zero right-hand side") {
  const auto l = build_laplacian(gen_grid2d(3));
  const auto r = fgmres(l, std::vector<double>(9, 0.0), nullptr);
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 0);
}

TEST_CASE("fgmres residual history is monotone and ends below tolerance") {
  const auto g = gen_grid2d(8);
  const auto h = build_hierarchy(g, {2, 0});
  const auto sys = expand_laplacian(build_laplacian(g), composite_prolongation(h, 1.0 / 8));
  std::vector<double> b(64, 1.0);
  b[63] = -63.0;
  const auto bt = project_rhs(sys.prolongation, b);
  const auto pegp = build_preconditioner(sys.L_pegp, PreconditionerKind::pegp);
  for (const Preconditioner* p : {static_cast<const Preconditioner*>(nullptr), &pegp}) {
    for (int restart : {0, 10}) {
      const auto r = fgmres(sys.L_expanded, bt, p, {1e-8, 1000, restart, true});
      CHECK(r.report.converged);
      CHECK(r.report.true_relative_residual <= 1e-8);
      const auto& hist = r.report.residual_history;
      CHECK(hist.front() == 1.0);
      for (std::size_t k = 1; k < hist.size(); ++k) CHECK(hist[k] <= hist[k - 1] + 1e-14);
      // The lifted solution solves the base system.
      const auto x = lift_solution(sys.prolongation, r.x);
      const auto lx = build_laplacian(g) * x;
      double err = 0.0;
      for (int i = 0; i < 64; ++i) err += (lx[i] - b[i]) * (lx[i] - b[i]);
      CHECK(std::sqrt(err) <= 1e-6 * norm2(b));
    }
  }
}

TEST_CASE("fgmres reports failure on an iteration cap") {
  const auto l = build_laplacian(gen_grid2d(10));
  std::vector<double> b(100, 1.0);
  b[99] = -99.0;
  const auto r = fgmres(l, b, nullptr, {1e-12, 3, 0, true});
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations == 3);
  CHECK_THROWS_AS(fgmres(l, std::vector<double>(5, 0.0), nullptr), Error);
}
