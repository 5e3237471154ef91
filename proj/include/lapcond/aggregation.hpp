#pragma once

#include "lapcond/graph.hpp"
#include "lapcond/sparse_matrix.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lapcond {

/// One visit of the matching pass. `partner` is -1 when every neighbor of the
/// visitor was already matched; such nodes are merged afterwards.
struct MatchVisit {
  int visitor;
  int partner;
  double weight;
};

struct AggregationResult {
  std::vector<int> assign;  ///< fine node -> aggregate index
  int num_aggregates = 0;
  WeightedGraph coarse;     ///< Galerkin graph: inter-aggregate weights summed
  std::vector<MatchVisit> visit_log;
  int leftovers = 0;        ///< nodes merged into an existing aggregate
};

/// Aggregates never grow beyond this unless a leftover has no other choice.
inline constexpr int kMaxAggregateSize = 3;

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<int> visit_permutation(int n, std::uint64_t seed);

/// Maximal weighted matching with a seeded random visit order.
AggregationResult mwm_aggregate(const WeightedGraph& g, std::uint64_t seed);

/// Maximal weighted matching visiting `visit_order` first, then every
/// remaining node in increasing index order.
///
/// Each unaggregated visitor is paired with its heaviest unaggregated
/// neighbor (ties go to the lowest index). Leftovers join the aggregate of
/// their heaviest neighbor, falling back to lighter neighbors whose aggregate
/// still has room, and to the heaviest one when all are full.
AggregationResult mwm_aggregate(const WeightedGraph& g, std::span<const int> visit_order);

enum class VisitOrder { random, natural };

struct CoarseningStep {
  int fine_size = 0;
  int coarse_size = 0;
  std::vector<int> assign;
  SparseMatrix prolongation;  ///< fine_size x coarse_size, one unit entry per row
  bool pure_matching = false; ///< every aggregate has exactly two nodes
};

/// Level 0 is the input graph; step k maps level k onto level k + 1.
struct AggregationHierarchy {
  std::vector<WeightedGraph> graphs;
  std::vector<CoarseningStep> steps;
  std::uint64_t seed = 0;
  VisitOrder order = VisitOrder::random;
  bool truncated = false;  ///< a level failed to shrink and coarsening stopped

  int num_levels() const { return static_cast<int>(graphs.size()); }
  int level_size(int level) const { return graphs.at(level).num_nodes(); }
  int base_size() const { return level_size(0); }
  bool pure_matching() const;
};

struct HierarchyOptions {
  std::optional<int> max_levels;  ///< nullopt: coarsen until at most two nodes remain
  std::uint64_t seed = 0;
  VisitOrder order = VisitOrder::random;
};

/// Repeats mwm_aggregate on successive coarse graphs. Each level draws its
/// visit order from a seed derived from (seed, level index).
AggregationHierarchy build_hierarchy(const WeightedGraph& g, const HierarchyOptions& opts);

/// Hierarchy from explicit aggregate maps, one per coarsening step
/// (assign[k][i] = aggregate of level-k node i). Aggregate ids must be 0..m-1.
AggregationHierarchy hierarchy_from_assignments(const WeightedGraph& g,
                                                std::vector<std::vector<int>> assign);

/// [I, -mu P^2, (-mu)^2 P^3, ...] where P^k maps level k-1 (0-based) to the base.
class CompositeProlongation {
 public:
  CompositeProlongation(const AggregationHierarchy& h, double mu);

  int n() const { return n_; }
  int n_tilde() const { return offsets_.back(); }
  double mu() const { return mu_; }
  int num_levels() const { return static_cast<int>(maps_.size()); }
  /// Column offset of each level inside the expanded index space; size num_levels()+1.
  std::span<const int> offsets() const { return offsets_; }
  /// Base node -> node index at `level` (level 0 is the identity).
  std::span<const int> level_map(int level) const { return maps_.at(level); }
  /// (-mu)^level
  double scale(int level) const { return scales_.at(level); }
  /// n x n_level block including its (-mu)^level factor.
  const SparseMatrix& block(int level) const { return blocks_.at(level); }
  /// Unscaled 0/1 composite prolongation for a level.
  SparseMatrix unscaled_block(int level) const;
  /// True when mu >= 1 was accepted for experimentation.
  bool mu_out_of_range() const { return mu_ >= 1.0; }

  /// x = P(mu) x_tilde
  std::vector<double> apply(std::span<const double> x_tilde) const;
  /// b_tilde = P(mu)^T b
  std::vector<double> apply_transpose(std::span<const double> b) const;
  SparseMatrix to_sparse() const;

 private:
  int n_ = 0;
  double mu_ = 0.0;
  std::vector<int> offsets_;
  std::vector<std::vector<int>> maps_;
  std::vector<double> scales_;
  std::vector<SparseMatrix> blocks_;
};

/// Throws Error when mu <= 0.
CompositeProlongation composite_prolongation(const AggregationHierarchy& h, double mu);

}  // namespace lapcond
