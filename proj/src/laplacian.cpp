#include "lapcond/laplacian.hpp"

#include <cmath>

namespace lapcond {

SparseMatrix build_laplacian(const WeightedGraph& g) {
  const int n = g.num_nodes();
  std::vector<Triplet> t;
  t.reserve(2 * g.num_edges() + n);
  for (int i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (const auto& nb : g.neighbors(i)) {
      if (std::abs(nb.w) < SparseMatrix::kDropTolerance) continue;
      t.push_back({i, nb.node, -nb.w});
      off_sum += -nb.w;
    }
    t.push_back({i, i, -off_sum});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t), true);
}

Incidence build_incidence(const WeightedGraph& g) {
  const int m = static_cast<int>(g.num_edges());
  std::vector<Triplet> b;
  std::vector<Triplet> w;
  b.reserve(2 * m);
  w.reserve(m);
  int e = 0;
  for (const auto& edge : g.edges()) {
    b.push_back({e, edge.u, 1.0});
    b.push_back({e, edge.v, -1.0});
    w.push_back({e, e, edge.w});
    ++e;
  }
  return {SparseMatrix::from_triplets(m, g.num_nodes(), std::move(b)),
          SparseMatrix::from_triplets(m, m, std::move(w), true)};
}

SparseMatrix sqrt_weights(const WeightedGraph& g) {
  if (!g.positive()) throw Error("sqrt_weights: graph has non-positive weights");
  const int m = static_cast<int>(g.num_edges());
  std::vector<Triplet> w;
  w.reserve(m);
  int e = 0;
  for (const auto& edge : g.edges()) {
    w.push_back({e, e, std::sqrt(edge.w)});
    ++e;
  }
  return SparseMatrix::from_triplets(m, m, std::move(w), true);
}

WeightedGraph graph_from_laplacian(const SparseMatrix& laplacian, double tol) {
  if (laplacian.nrows() != laplacian.ncols()) throw Error("graph_from_laplacian: not square");
  std::vector<Edge> edges;
  for (int i = 0; i < laplacian.nrows(); ++i) {
    auto cols = laplacian.row_cols(i);
    auto vals = laplacian.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] > i && std::abs(vals[k]) > tol) edges.push_back({i, cols[k], -vals[k]});
    }
  }
  return WeightedGraph(laplacian.nrows(), std::move(edges));
}

double quadratic_form(const WeightedGraph& g, std::span<const double> v) {
  double s = 0.0;
  for (const auto& e : g.edges()) {
    const double d = v[e.u] - v[e.v];
    s += e.w * d * d;
  }
  return s;
}

}  // namespace lapcond
