#pragma once

#include "lapcond/aggregation.hpp"
#include "lapcond/graph.hpp"
#include "lapcond/sparse_matrix.hpp"

#include <utility>
#include <vector>

namespace lapcond {

/// Multilevel expanded system P(mu)^T L_G P(mu) together with its split into
/// positively weighted edges (the PEGP graph) and sign-flipped negative edges.
///
/// Invariant: L_expanded == L_pegp - L_neg entrywise.
struct ExpandedSystem {
  SparseMatrix L_expanded;
  WeightedGraph graph_expanded;  ///< signed weights
  WeightedGraph pegp;            ///< edges with positive weight
  SparseMatrix L_pegp;
  WeightedGraph negative;        ///< negative edges with their magnitudes
  SparseMatrix L_neg;
  CompositeProlongation prolongation;
  double mu = 0.0;

  int n() const { return prolongation.n(); }
  int n_tilde() const { return prolongation.n_tilde(); }
  int num_levels() const { return prolongation.num_levels(); }
  std::span<const int> level_offsets() const { return prolongation.offsets(); }
  /// Level (0 = base) holding expanded node `node`.
  int level_of(int node) const;
};

/// Entries of an unscaled block (P^k)^T L P^k' at or below this fraction of the
/// block's largest entry count as structural zeros.
inline constexpr double kExpansionZeroTolerance = 1e-12;

/// Assembles the expanded Laplacian blockwise from sparse triple products
/// (P^k)^T L_G P^k' and classifies the off-diagonal entries by sign.
ExpandedSystem expand_laplacian(const SparseMatrix& laplacian, const CompositeProlongation& p);

/// The PEGP graph and its Laplacian. The diagonal is the positive-degree sum,
/// not the diagonal of the expanded Laplacian.
std::pair<WeightedGraph, SparseMatrix> extract_positive_subgraph(const ExpandedSystem& sys);

/// Laplacian of the negatively weighted edges, taken with positive magnitude.
SparseMatrix extract_negative_subgraph(const ExpandedSystem& sys);

enum class MspEdgeClass { top_level, inter_level, intra_aggregate };

/// Which positive inter-level edges the sparsifier keeps.
enum class InterLevelEdges {
  all,          ///< every positive edge whose endpoints sit on different levels
  /// Base nodes keep only the edge to their own aggregate; coarser nodes keep
  /// all. Base eliminations then stay fill-free beyond two levels too, at the
  /// price of higher stretch.
  base_parent,
};

struct MspOptions {
  InterLevelEdges inter_level = InterLevelEdges::all;
};

struct MspGraph {
  WeightedGraph graph;
  std::vector<MspEdgeClass> classes;  ///< parallel to graph.edges()
};

/// Keeps top-level edges, inter-level edges and edges inside an aggregate at
/// every non-top level. Throws Error when the result is not connected.
MspGraph extract_msp(const ExpandedSystem& sys, const AggregationHierarchy& h,
                     const MspOptions& opts = {});

/// Elimination order for factorizing the sparsifier: level by level from the
/// base upward, aggregate by aggregate, lower-degree members first; top-level
/// nodes last.
std::vector<int> msp_elimination_order(const MspGraph& msp, const ExpandedSystem& sys,
                                       const AggregationHierarchy& h);

/// x = P(mu) x_tilde
std::vector<double> lift_solution(const CompositeProlongation& p, std::span<const double> x_tilde);

/// b_tilde = P(mu)^T b
std::vector<double> project_rhs(const CompositeProlongation& p, std::span<const double> b);

enum class PathMetric {
  resistance,  ///< minimize the sum of 1/w along the path
  weight_sum,  ///< minimize the sum of w along the path
};

struct StretchResult {
  std::vector<double> per_edge;  ///< parallel to base.edges()
  double total = 0.0;
};

/// Stretch of every base edge over a path in the sparsifier:
/// w(i,j) * sum over the path of 1/w. The path is chosen by `metric`.
StretchResult stretch(const WeightedGraph& base, const WeightedGraph& sparsifier,
                      PathMetric metric = PathMetric::resistance);

}  // namespace lapcond
