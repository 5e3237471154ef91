#include "lapcond/expansion.hpp"

#include <limits>
#include <queue>

namespace lapcond {

namespace {

struct Label {
  double length;           // primary path metric
  long double resistance;  // sum of 1/w along the chosen path; extended so w * (1/w) rounds to 1
};

// Single-source shortest paths in `g` under `metric`, stopping once every
// target has been settled. Ties in the primary metric keep the lower resistance.
std::vector<Label> shortest_paths(const WeightedGraph& g, int source, PathMetric metric,
                                  std::span<const int> targets) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<Label> dist(g.num_nodes(), {inf, inf});
  std::vector<char> settled(g.num_nodes(), 0);
  std::vector<char> wanted(g.num_nodes(), 0);
  std::size_t remaining = 0;
  for (int t : targets) {
    if (!wanted[t]) {
      wanted[t] = 1;
      ++remaining;
    }
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = {0.0, 0.0};
  heap.push({0.0, source});
  while (!heap.empty() && remaining > 0) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > dist[u].length) continue;
    settled[u] = 1;
    if (wanted[u]) --remaining;
    for (const auto& nb : g.neighbors(u)) {
      if (settled[nb.node]) continue;
      const double step = metric == PathMetric::resistance ? 1.0 / nb.w : nb.w;
      const Label cand{d + step, dist[u].resistance + 1.0L / nb.w};
      Label& cur = dist[nb.node];
      if (cand.length < cur.length ||
          (cand.length == cur.length && cand.resistance < cur.resistance)) {
        cur = cand;
        heap.push({cand.length, nb.node});
      }
    }
  }
  return dist;
}

}  // namespace

StretchResult stretch(const WeightedGraph& base, const WeightedGraph& sparsifier,
                      PathMetric metric) {
  if (base.num_nodes() != sparsifier.num_nodes())
    throw Error("stretch: sparsifier must span the base node set");
  if (!base.positive() || !sparsifier.positive())
    throw Error("stretch: both graphs need positive weights");
  if (!is_connected(sparsifier)) throw Error("stretch: sparsifier is disconnected");

  StretchResult res;
  res.per_edge.assign(base.num_edges(), 0.0);
  const auto edges = base.edges();
  // Edges are sorted by u, so each source owns a contiguous run.
  std::size_t k = 0;
  std::vector<int> targets;
  while (k < edges.size()) {
    const int u = edges[k].u;
    std::size_t end = k;
    targets.clear();
    while (end < edges.size() && edges[end].u == u) targets.push_back(edges[end++].v);
    const auto dist = shortest_paths(sparsifier, u, metric, targets);
    for (std::size_t e = k; e < end; ++e) {
      res.per_edge[e] = static_cast<double>(edges[e].w * dist[edges[e].v].resistance);
      res.total += res.per_edge[e];
    }
    k = end;
  }
  return res;
}

}  // namespace lapcond
