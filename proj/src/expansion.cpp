#include "lapcond/expansion.hpp"

#include "lapcond/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace lapcond {

int ExpandedSystem::level_of(int node) const {
  auto off = level_offsets();
  if (node < 0 || node >= off.back()) throw Error("level_of: node out of range");
  auto it = std::upper_bound(off.begin(), off.end(), node);
  return static_cast<int>(it - off.begin()) - 1;
}

ExpandedSystem expand_laplacian(const SparseMatrix& laplacian, const CompositeProlongation& p) {
  if (laplacian.nrows() != laplacian.ncols() || laplacian.nrows() != p.n())
    throw Error("expand_laplacian: Laplacian is " + std::to_string(laplacian.nrows()) + "x" +
                std::to_string(laplacian.ncols()) + " but prolongation has " +
                std::to_string(p.n()) + " rows");

  const int levels = p.num_levels();
  const auto off = p.offsets();
  std::vector<SparseMatrix> unscaled(levels);
  std::vector<SparseMatrix> unscaled_t(levels);
  for (int k = 0; k < levels; ++k) {
    unscaled[k] = p.unscaled_block(k);
    unscaled_t[k] = unscaled[k].transpose();
  }

  // Upper triangle only (global row < col); the lower half is its mirror.
  // Cancellation is judged on the unscaled block, since (-mu)^(k+k') can
  // push legitimate coarse entries far below the base-level magnitudes.
  std::vector<Triplet> upper;
  for (int kc = 0; kc < levels; ++kc) {
    const SparseMatrix lp = multiply(laplacian, unscaled[kc]);
    for (int kr = 0; kr <= kc; ++kr) {
      const SparseMatrix block = multiply(unscaled_t[kr], lp);
      const double s = p.scale(kr) * p.scale(kc);
      const double tol = kExpansionZeroTolerance * block.max_abs();
      for (int a = 0; a < block.nrows(); ++a) {
        auto cols = block.row_cols(a);
        auto vals = block.row_values(a);
        for (std::size_t q = 0; q < cols.size(); ++q) {
          if (std::abs(vals[q]) <= tol) continue;
          const int gi = off[kr] + a;
          const int gj = off[kc] + cols[q];
          if (gi < gj) upper.push_back({gi, gj, s * vals[q]});
        }
      }
    }
  }

  std::vector<Edge> signed_edges;
  std::vector<Edge> pos_edges;
  std::vector<Edge> neg_edges;
  for (const auto& t : upper) {
    signed_edges.push_back({t.row, t.col, -t.value});
    if (t.value < 0) {
      pos_edges.push_back({t.row, t.col, -t.value});
    } else {
      neg_edges.push_back({t.row, t.col, t.value});
    }
  }

  const int nt = p.n_tilde();
  WeightedGraph expanded(nt, std::move(signed_edges));
  WeightedGraph pegp(nt, std::move(pos_edges));
  WeightedGraph negative(nt, std::move(neg_edges));
  SparseMatrix l_expanded = build_laplacian(expanded);
  SparseMatrix l_pegp = build_laplacian(pegp);
  SparseMatrix l_neg = build_laplacian(negative);
  return ExpandedSystem{std::move(l_expanded), std::move(expanded), std::move(pegp),
                        std::move(l_pegp),     std::move(negative), std::move(l_neg),
                        p,                     p.mu()};
}

std::pair<WeightedGraph, SparseMatrix> extract_positive_subgraph(const ExpandedSystem& sys) {
  return {sys.pegp, sys.L_pegp};
}

SparseMatrix extract_negative_subgraph(const ExpandedSystem& sys) { return sys.L_neg; }

namespace {

// Parent of a level-local node one level up, or -1 on the top level.
int parent_of(const AggregationHierarchy& h, int level, int local) {
  if (level + 1 >= h.num_levels()) return -1;
  return h.steps[level].assign[local];
}

}  // namespace

MspGraph extract_msp(const ExpandedSystem& sys, const AggregationHierarchy& h,
                     const MspOptions& opts) {
  if (h.num_levels() != sys.num_levels() || h.base_size() != sys.n())
    throw Error("extract_msp: hierarchy does not match the expanded system");
  const auto off = sys.level_offsets();
  const int top = sys.num_levels() - 1;

  auto classify = [&](const Edge& e) -> std::optional<MspEdgeClass> {
    const int lu = sys.level_of(e.u);
    const int lv = sys.level_of(e.v);
    const int au = e.u - off[lu];
    const int av = e.v - off[lv];
    if (lu == lv) {
      if (lu == top) return MspEdgeClass::top_level;
      if (parent_of(h, lu, au) == parent_of(h, lv, av)) return MspEdgeClass::intra_aggregate;
      return std::nullopt;
    }
    // e.u < e.v, so u sits on the lower level.
    if (opts.inter_level == InterLevelEdges::all || lu > 0) return MspEdgeClass::inter_level;
    if (lv == 1 && parent_of(h, 0, au) == av) return MspEdgeClass::inter_level;
    return std::nullopt;
  };

  std::vector<Edge> kept;
  for (const auto& e : sys.pegp.edges())
    if (classify(e)) kept.push_back(e);

  MspGraph msp{WeightedGraph(sys.n_tilde(), std::move(kept)), {}};
  msp.classes.reserve(msp.graph.num_edges());
  for (const auto& e : msp.graph.edges()) msp.classes.push_back(*classify(e));

  if (!is_connected(msp.graph))
    throw Error("extract_msp: sparsifier is disconnected (degenerate hierarchy; use fewer levels)");
  return msp;
}

std::vector<int> msp_elimination_order(const MspGraph& msp, const ExpandedSystem& sys,
                                       const AggregationHierarchy& h) {
  const auto off = sys.level_offsets();
  const int levels = sys.num_levels();
  std::vector<int> order;
  order.reserve(sys.n_tilde());
  for (int k = 0; k + 1 < levels; ++k) {
    const int coarse = h.level_size(k + 1);
    std::vector<std::vector<int>> members(coarse);
    for (int a = 0; a < h.level_size(k); ++a) members[h.steps[k].assign[a]].push_back(off[k] + a);
    for (auto& group : members) {
      std::stable_sort(group.begin(), group.end(), [&](int x, int y) {
        return msp.graph.degree(x) < msp.graph.degree(y);
      });
      order.insert(order.end(), group.begin(), group.end());
    }
  }
  for (int v = off[levels - 1]; v < off[levels]; ++v) order.push_back(v);
  return order;
}

std::vector<double> lift_solution(const CompositeProlongation& p, std::span<const double> x_tilde) {
  return p.apply(x_tilde);
}

std::vector<double> project_rhs(const CompositeProlongation& p, std::span<const double> b) {
  return p.apply_transpose(b);
}

}  // namespace lapcond
