#include "doctest.h"

#include "../support/fixtures.hpp"

#include "lapcond/aggregation.hpp"
#include "lapcond/generators.hpp"
#include "lapcond/laplacian.hpp"

#include <algorithm>
#include <map>
#include <random>

using namespace lapcond;

namespace {

// Replays the visit log: every matched visitor must have taken a heaviest
// neighbor among those still free at that moment.
void check_visit_log(const WeightedGraph& g, const AggregationResult& r) {
  std::vector<char> taken(g.num_nodes(), 0);
  for (const auto& v : r.visit_log) {
    REQUIRE_FALSE(taken[v.visitor]);
    double best = 0.0;
    for (const auto& nb : g.neighbors(v.visitor))
      if (!taken[nb.node]) best = std::max(best, nb.w);
    if (v.partner < 0) {
      CHECK(best == 0.0);
      continue;
    }
    CHECK_FALSE(taken[v.partner]);
    CHECK(v.weight == best);
    CHECK(g.weight(v.visitor, v.partner) == v.weight);
    taken[v.visitor] = taken[v.partner] = 1;
  }
}

WeightedGraph anisotropic_two_row(int cols) {
  std::vector<Edge> e;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c + 1 < cols; ++c) e.push_back({r * cols + c, r * cols + c + 1, 10.0});
  for (int c = 0; c < cols; ++c) e.push_back({c, cols + c, 1.0});
  return WeightedGraph(2 * cols, std::move(e));
}

}  // namespace

TEST_CASE("K2 collapses to one aggregate") {
  const WeightedGraph g(2, {{0, 1, 1.0}});
  const auto r = mwm_aggregate(g, std::uint64_t{0});
  CHECK(r.num_aggregates == 1);
  CHECK(r.assign == std::vector<int>{0, 0});
  CHECK(r.coarse.num_nodes() == 1);
  CHECK(r.coarse.num_edges() == 0);
}

TEST_CASE("forced visit order reproduces the worked example aggregates") {
  const auto g = fixtures::eight_node_grid();
  const std::vector<int> order{0, 2, 4, 6};
  const auto r = mwm_aggregate(g, order);
  CHECK(r.assign == std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3});
  CHECK(r.leftovers == 0);
  check_visit_log(g, r);
  // Galerkin weights: the two rows are joined by two rungs per aggregate pair.
  CHECK(r.coarse.weight(0, 1) == 1.0);
  CHECK(r.coarse.weight(0, 2) == 2.0);
  CHECK(r.coarse.weight(1, 3) == 2.0);
  CHECK(r.coarse.weight(2, 3) == 1.0);
  CHECK(r.coarse.num_edges() == 4);
}

TEST_CASE("heavy edges win on an anisotropic grid") {
  const auto g = anisotropic_two_row(8);
  const auto r = mwm_aggregate(g, std::span<const int>{});
  CHECK(r.leftovers == 0);
  for (int a = 0; a < r.num_aggregates; ++a) {
    std::vector<int> m;
    for (int i = 0; i < g.num_nodes(); ++i)
      if (r.assign[i] == a) m.push_back(i);
    REQUIRE(m.size() == 2);
    CHECK(g.weight(m[0], m[1]) == 10.0);
  }
}

TEST_CASE("visit log obeys the heaviest-free-neighbor rule for random orders") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = fixtures::random_connected_graph(30, 25, rng);
    const auto r = mwm_aggregate(g, static_cast<std::uint64_t>(trial));
    check_visit_log(g, r);
    int logged_leftovers = 0;
    for (const auto& v : r.visit_log) logged_leftovers += v.partner < 0;
    CHECK(logged_leftovers == r.leftovers);
    // Leftovers are never adjacent to each other.
    for (const auto& v : r.visit_log) {
      if (v.partner >= 0) continue;
      for (const auto& w : r.visit_log)
        if (w.partner < 0) CHECK_FALSE(g.has_edge(v.visitor, w.visitor));
    }
    std::vector<int> size(r.num_aggregates, 0);
    for (int a : r.assign) ++size[a];
    for (int s : size) CHECK(s >= 2);
  }
}

TEST_CASE("same seed gives the same aggregation") {
  const auto g = gen_grid2d(8);
  const auto a = mwm_aggregate(g, std::uint64_t{42});
  const auto b = mwm_aggregate(g, std::uint64_t{42});
  CHECK(a.assign == b.assign);
  const auto ha = build_hierarchy(g, {std::nullopt, 9, VisitOrder::random});
  const auto hb = build_hierarchy(g, {std::nullopt, 9, VisitOrder::random});
  REQUIRE(ha.num_levels() == hb.num_levels());
  for (std::size_t k = 0; k < ha.steps.size(); ++k) CHECK(ha.steps[k].assign == hb.steps[k].assign);
}

TEST_CASE("visit permutation is a permutation") {
  auto p = visit_permutation(50, 3);
  std::sort(p.begin(), p.end());
  for (int i = 0; i < 50; ++i) CHECK(p[i] == i);
}

TEST_CASE("coarse graph equals the Galerkin product") {
  std::mt19937_64 rng(23);
  const auto g = fixtures::random_connected_graph(20, 15, rng);
  const auto r = mwm_aggregate(g, std::uint64_t{5});
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(20, r.num_aggregates);
  for (int i = 0; i < 20; ++i) p(i, r.assign[i]) = 1.0;
  const Eigen::MatrixXd lc = p.transpose() * build_laplacian(g).to_dense() * p;
  CHECK(fixtures::max_abs_diff(build_laplacian(r.coarse).to_dense(), lc) < 1e-13);
}

TEST_CASE("hierarchy sizes") {
  const auto g = fixtures::eight_node_grid();
  const auto two = build_hierarchy(g, {2, 0, VisitOrder::natural});
  REQUIRE(two.num_levels() == 2);
  CHECK(two.level_size(0) == 8);
  CHECK(two.level_size(1) == 4);
  CHECK(two.steps[0].assign == std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3});

  const auto k2 = build_hierarchy(WeightedGraph(2, {{0, 1, 1.0}}), {std::nullopt, 0});
  REQUIRE(k2.num_levels() == 2);
  CHECK(k2.level_size(1) == 1);

  const auto big = build_hierarchy(gen_grid2d(32), {std::nullopt, 0, VisitOrder::natural});
  CHECK(big.num_levels() == 10);
  CHECK(big.pure_matching());
  CHECK(big.level_size(9) == 2);
}

TEST_CASE("random hierarchies never leave a one-node coarse level") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto h = build_hierarchy(gen_grid2d(6), {std::nullopt, seed});
    CHECK(h.level_size(h.num_levels() - 1) >= 2);
    for (int k = 1; k < h.num_levels(); ++k) CHECK(h.level_size(k) < h.level_size(k - 1));
  }
}

TEST_CASE("hierarchy_from_assignments validates ids") {
  const auto g = fixtures::eight_node_grid();
  CHECK_THROWS_AS(hierarchy_from_assignments(g, {{0, 0, 1, 1, 3, 3, 3, 3}}), Error);
  CHECK_THROWS_AS(hierarchy_from_assignments(g, {{0, 0, 1}}), Error);
  const auto h = fixtures::eight_node_hierarchy();
  CHECK(h.pure_matching());
}

TEST_CASE("composite prolongation of the worked example") {
  const auto h = fixtures::eight_node_hierarchy();
  const auto p = composite_prolongation(h, 0.5);
  CHECK(p.n() == 8);
  CHECK(p.n_tilde() == 12);
  Eigen::MatrixXd p12 = Eigen::MatrixXd::Zero(8, 4);
  for (int i = 0; i < 8; ++i) p12(i, i / 2) = 1.0;
  CHECK(fixtures::max_abs_diff(p.unscaled_block(1).to_dense(), p12) == 0.0);
  CHECK(fixtures::max_abs_diff(p.block(1).to_dense(), -0.5 * p12) == 0.0);
  Eigen::MatrixXd full(8, 12);
  full << Eigen::MatrixXd::Identity(8, 8), -0.5 * p12;
  CHECK(fixtures::max_abs_diff(fixtures::dense_prolongation(p), full) == 0.0);
  CHECK_THROWS_AS(composite_prolongation(h, 0.0), Error);
}

TEST_CASE("third-level block is the product of the step prolongations") {
  const auto g = gen_grid2d(6);
  const auto h = build_hierarchy(g, {3, 4});
  REQUIRE(h.num_levels() == 3);
  const double mu = 0.3;
  const auto p = composite_prolongation(h, mu);
  const Eigen::MatrixXd chain = h.steps[0].prolongation.to_dense() * h.steps[1].prolongation.to_dense();
  CHECK(fixtures::max_abs_diff(p.unscaled_block(2).to_dense(), chain) == 0.0);
  CHECK(fixtures::max_abs_diff(p.block(2).to_dense(), mu * mu * chain) < 1e-15);
  CHECK(p.scale(2) == doctest::Approx(mu * mu));
  for (int i = 0; i < 36; ++i) CHECK(p.level_map(2)[i] == h.steps[1].assign[h.steps[0].assign[i]]);
}
