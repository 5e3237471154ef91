#include "lapcond/generators.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <utility>

namespace lapcond {

WeightedGraph gen_grid2d(int side) {
  if (side < 2) throw Error("gen_grid2d: side must be at least 2");
  std::vector<Edge> edges;
  edges.reserve(2 * side * (side - 1));
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const int v = r * side + c;
      if (c + 1 < side) edges.push_back({v, v + 1, 1.0});
      if (r + 1 < side) edges.push_back({v, v + side, 1.0});
    }
  return WeightedGraph(side * side, std::move(edges));
}

namespace {

std::vector<std::pair<int, int>> ring_pairs(int n, int deg) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * deg / 2);
  for (int j = 1; j <= deg / 2; ++j)
    for (int i = 0; i < n; ++i) pairs.emplace_back(i, (i + j) % n);
  return pairs;
}

void check_ring(int n, int deg, const char* who) {
  if (deg < 2 || deg % 2 != 0)
    throw Error(std::string(who) + ": degree must be even and at least 2");
  if (deg >= n) throw Error(std::string(who) + ": degree must be below n");
}

}  // namespace

WeightedGraph gen_ring(int n, int deg) {
  check_ring(n, deg, "gen_ring");
  std::vector<Edge> edges;
  for (auto [u, v] : ring_pairs(n, deg)) edges.push_back({u, v, 1.0});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph gen_watts_strogatz(int n, int deg, double beta, std::uint64_t seed) {
  check_ring(n, deg, "gen_watts_strogatz");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error("gen_watts_strogatz: beta must lie in [0,1]");

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<std::set<int>> adj(n);
    const auto pairs = ring_pairs(n, deg);
    for (auto [u, v] : pairs) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
    for (auto [u, v] : pairs) {
      if (coin(rng) >= beta) continue;
      if (static_cast<int>(adj[u].size()) >= n - 1) continue;
      int w;
      do {
        w = pick(rng);
      } while (w == u || adj[u].count(w));
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v : adj[u])
        if (u < v) edges.push_back({u, v, 1.0});
    WeightedGraph g(n, std::move(edges));
    if (is_connected(g)) return g;
  }
  throw Error("gen_watts_strogatz: no connected graph after 100 attempts");
}

}  // namespace lapcond
