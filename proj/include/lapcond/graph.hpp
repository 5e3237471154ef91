#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lapcond {

/// Thrown for invalid arguments and violated preconditions throughout the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  int u;
  int v;
  double w;
};

struct Neighbor {
  int node;
  double w;
};

/// Simple undirected weighted graph. Weights may be signed.
///
/// Edges are stored with u < v and sorted lexicographically; an adjacency
/// (CSR) view with neighbors sorted by index is built on construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Throws Error on self-loops, duplicate pairs or out-of-range endpoints.
  WeightedGraph(int n, std::vector<Edge> edges, std::vector<std::int64_t> node_labels = {});

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  /// True when every stored weight is strictly positive.
  bool positive() const { return positive_; }

  std::span<const Neighbor> neighbors(int node) const {
    return {adj_.data() + adj_ptr_[node], adj_.data() + adj_ptr_[node + 1]};
  }
  int degree(int node) const { return adj_ptr_[node + 1] - adj_ptr_[node]; }

  /// Weight of edge {u, v}, or 0 when absent.
  double weight(int u, int v) const;
  bool has_edge(int u, int v) const;

  /// Original identifiers (e.g. 1-based file indices); empty when not tracked.
  std::span<const std::int64_t> node_labels() const { return labels_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> labels_;
  bool positive_ = true;
  std::vector<int> adj_ptr_{0};
  std::vector<Neighbor> adj_;
};

/// Connected components ignoring weight signs. Components are ordered by their
/// smallest node index and each component lists its nodes in increasing order.
std::vector<std::vector<int>> connected_components(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

/// Subgraph induced by `nodes` (relabelled 0..k-1 in the given order). Labels
/// are carried over when present, otherwise the original indices become labels.
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const int> nodes);

}  // namespace lapcond
