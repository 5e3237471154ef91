#include "lapcond/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace lapcond {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges, std::vector<std::int64_t> node_labels)
    : n_(n), edges_(std::move(edges)), labels_(std::move(node_labels)) {
  if (n < 0) throw Error("WeightedGraph: negative node count");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
    throw Error("WeightedGraph: label count does not match node count");

  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw Error("WeightedGraph: edge endpoint out of range");
    if (e.u == e.v) throw Error("WeightedGraph: self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v)
      throw Error("WeightedGraph: duplicate edge (" + std::to_string(edges_[k].u) + ", " +
                  std::to_string(edges_[k].v) + ")");
  }
  positive_ = std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w > 0; });

  std::vector<int> deg(n, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  adj_ptr_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) adj_ptr_[i + 1] = adj_ptr_[i] + deg[i];
  adj_.resize(adj_ptr_[n]);
  std::vector<int> fill(adj_ptr_.begin(), adj_ptr_.end() - 1);
  // Edges are sorted by (u, v), so appending in this order keeps each
  // neighbor list sorted: lower neighbors arrive before higher ones.
  for (const auto& e : edges_) adj_[fill[e.v]++] = {e.u, e.w};
  for (const auto& e : edges_) adj_[fill[e.u]++] = {e.v, e.w};
}

double WeightedGraph::weight(int u, int v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v,
                             [](const Neighbor& a, int key) { return a.node < key; });
  return (it != nb.end() && it->node == v) ? it->w : 0.0;
}

bool WeightedGraph::has_edge(int u, int v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v,
                             [](const Neighbor& a, int key) { return a.node < key; });
  return it != nb.end() && it->node == v;
}

std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
  const int n = g.num_nodes();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  std::queue<int> q;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int c = static_cast<int>(out.size());
    out.emplace_back();
    comp[s] = c;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      out[c].push_back(u);
      for (const auto& nb : g.neighbors(u)) {
        if (comp[nb.node] < 0) {
          comp[nb.node] = c;
          q.push(nb.node);
        }
      }
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

bool is_connected(const WeightedGraph& g) {
  return g.num_nodes() <= 1 || connected_components(g).size() == 1;
}

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const int> nodes) {
  std::vector<int> local(g.num_nodes(), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = static_cast<int>(k);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (local[e.u] >= 0 && local[e.v] >= 0) edges.push_back({local[e.u], local[e.v], e.w});
  }
  std::vector<std::int64_t> labels(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    labels[k] = g.node_labels().empty() ? nodes[k] : g.node_labels()[nodes[k]];
  return WeightedGraph(static_cast<int>(nodes.size()), std::move(edges), std::move(labels));
}

}  // namespace lapcond
