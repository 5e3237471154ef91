#pragma once

// Shared inputs and independent dense oracles for the unit and acceptance tests.

#include "lapcond/aggregation.hpp"
#include "lapcond/expansion.hpp"
#include "lapcond/graph.hpp"
#include "lapcond/laplacian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace fixtures {

using lapcond::Edge;
using lapcond::WeightedGraph;

// 2 x 4 lattice, nodes 0..3 on the top row and 4..7 below.
inline WeightedGraph eight_node_grid() {
  return WeightedGraph(8, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {4, 5, 1}, {5, 6, 1}, {6, 7, 1},
                           {0, 4, 1}, {1, 5, 1}, {2, 6, 1}, {3, 7, 1}});
}

inline lapcond::AggregationHierarchy eight_node_hierarchy() {
  return lapcond::hierarchy_from_assignments(eight_node_grid(), {{0, 0, 1, 1, 2, 2, 3, 3}});
}

// Typed in from the worked example, 1-based rows as printed.
inline Eigen::MatrixXd golden_expanded(double m) {
  const double q = m * m;
  Eigen::MatrixXd a(12, 12);
  a << 2, -1, 0, 0, -1, 0, 0, 0, -m, 0, m, 0,
      -1, 3, -1, 0, 0, -1, 0, 0, -2 * m, m, m, 0,
      0, -1, 3, -1, 0, 0, -1, 0, m, -2 * m, 0, m,
      0, 0, -1, 2, 0, 0, 0, -1, 0, -m, 0, m,
      -1, 0, 0, 0, 2, -1, 0, 0, m, 0, -m, 0,
      0, -1, 0, 0, -1, 3, -1, 0, m, 0, -2 * m, m,
      0, 0, -1, 0, 0, -1, 3, -1, 0, m, m, -2 * m,
      0, 0, 0, -1, 0, 0, -1, 2, 0, m, 0, -m,
      -m, -2 * m, m, 0, m, m, 0, 0, 3 * q, -q, -2 * q, 0,
      0, m, -2 * m, -m, 0, 0, m, m, -q, 3 * q, 0, -2 * q,
      m, m, 0, 0, -m, -2 * m, m, 0, -2 * q, 0, 3 * q, -q,
      0, 0, m, m, 0, m, -2 * m, -m, 0, -2 * q, -q, 3 * q;
  return a;
}

inline Eigen::MatrixXd golden_pegp(double m) {
  const double q = m * m;
  const double c = 3 * q + 3 * m;
  Eigen::MatrixXd a(12, 12);
  a << 2 + m, -1, 0, 0, -1, 0, 0, 0, -m, 0, 0, 0,
      -1, 3 + 2 * m, -1, 0, 0, -1, 0, 0, -2 * m, 0, 0, 0,
      0, -1, 3 + 2 * m, -1, 0, 0, -1, 0, 0, -2 * m, 0, 0,
      0, 0, -1, 2 + m, 0, 0, 0, -1, 0, -m, 0, 0,
      -1, 0, 0, 0, 2 + m, -1, 0, 0, 0, 0, -m, 0,
      0, -1, 0, 0, -1, 3 + 2 * m, -1, 0, 0, 0, -2 * m, 0,
      0, 0, -1, 0, 0, -1, 3 + 2 * m, -1, 0, 0, 0, -2 * m,
      0, 0, 0, -1, 0, 0, -1, 2 + m, 0, 0, 0, -m,
      -m, -2 * m, 0, 0, 0, 0, 0, 0, c, -q, -2 * q, 0,
      0, 0, -2 * m, -m, 0, 0, 0, 0, -q, c, 0, -2 * q,
      0, 0, 0, 0, -m, -2 * m, 0, 0, -2 * q, 0, c, -q,
      0, 0, 0, 0, 0, 0, -2 * m, -m, 0, -2 * q, -q, c;
  return a;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Random spanning tree plus `extra` chords, weights uniform in [0.5, 2].
inline WeightedGraph random_connected_graph(int n, int extra, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  std::vector<Edge> edges;
  std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
  auto add = [&](int u, int v) {
    if (u == v || seen[u][v]) return false;
    seen[u][v] = seen[v][u] = 1;
    edges.push_back({std::min(u, v), std::max(u, v), wdist(rng)});
    return true;
  };
  for (int v = 1; v < n; ++v) add(v, std::uniform_int_distribution<int>(0, v - 1)(rng));
  const long long cap = static_cast<long long>(n) * (n - 1) / 2 - (n - 1);
  const int want = static_cast<int>(std::min<long long>(extra, cap));
  for (int added = 0; added < want;) {
    const int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (add(u, v)) ++added;
  }
  return WeightedGraph(n, std::move(edges));
}

inline Eigen::MatrixXd dense_prolongation(const lapcond::CompositeProlongation& p) {
  return p.to_sparse().to_dense();
}

// Nonzero eigenvalues of pinv(B) A, general eigensolver on the dense product.
// Returns them sorted ascending.
inline std::vector<double> pinv_pencil_nonzero(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                               double rel_zero = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  const auto& ev = es.eigenvalues();
  const double cut = 1e-10 * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cut) inv(i) = 1.0 / ev(i);
  const Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> gs(pinv * a, false);
  std::vector<double> vals;
  double top = 0.0;
  for (int i = 0; i < gs.eigenvalues().size(); ++i) top = std::max(top, std::abs(gs.eigenvalues()(i)));
  for (int i = 0; i < gs.eigenvalues().size(); ++i) {
    const auto z = gs.eigenvalues()(i);
    if (std::abs(z) > rel_zero * top) vals.push_back(z.real());
  }
  std::sort(vals.begin(), vals.end());
  return vals;
}

// Singular values of a dense symmetric matrix at or below rel * sigma_max.
inline int svd_null_dim(const Eigen::MatrixXd& a, double rel = 1e-10) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double cut = rel * s(0);
  int k = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) <= cut) ++k;
  return k;
}

// Floyd-Warshall on 1/w lengths; stretch of every base edge, summed.
inline double floyd_warshall_stretch(const WeightedGraph& base, const WeightedGraph& sparsifier) {
  const int n = sparsifier.num_nodes();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, inf);
  for (int i = 0; i < n; ++i) d(i, i) = 0.0;
  for (const auto& e : sparsifier.edges()) {
    d(e.u, e.v) = std::min(d(e.u, e.v), 1.0 / e.w);
    d(e.v, e.u) = d(e.u, e.v);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  double total = 0.0;
  for (const auto& e : base.edges()) total += e.w * d(e.u, e.v);
  return total;
}

// x = P(mu) * argmin ||L_expanded y - P(mu)^T b||, via a dense complete
// orthogonal decomposition (minimum-norm least squares).
inline Eigen::VectorXd lift_least_squares(const lapcond::ExpandedSystem& sys,
                                          const Eigen::VectorXd& b) {
  const Eigen::MatrixXd p = dense_prolongation(sys.prolongation);
  const Eigen::MatrixXd lt = sys.L_expanded.to_dense();
  const Eigen::VectorXd bt = p.transpose() * b;
  const Eigen::VectorXd y = lt.completeOrthogonalDecomposition().solve(bt);
  return p * y;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> random_perp_ones(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> y(n);
  double s = 0.0;
  for (auto& v : y) s += (v = nd(rng));
  for (auto& v : y) v -= s / n;
  return y;
}

// Tree with random attachment and random weights.
inline WeightedGraph random_tree(int n, std::mt19937_64& rng) {
  return random_connected_graph(n, 0, rng);
}

}  // namespace fixtures
