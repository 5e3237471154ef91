#include "lapcond/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lapcond {

std::vector<int> visit_permutation(int n, std::uint64_t seed) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates: std::shuffle's draw sequence is implementation defined.
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  return perm;
}

AggregationResult mwm_aggregate(const WeightedGraph& g, std::uint64_t seed) {
  const auto order = visit_permutation(g.num_nodes(), seed);
  return mwm_aggregate(g, order);
}

namespace {

WeightedGraph galerkin_graph(const WeightedGraph& g, std::span<const int> assign, int num_agg) {
  std::vector<Triplet> t;
  t.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    int a = assign[e.u];
    int b = assign[e.v];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    t.push_back({a, b, e.w});
  }
  const auto summed = SparseMatrix::from_triplets(num_agg, num_agg, std::move(t));
  std::vector<Edge> edges;
  edges.reserve(summed.nnz());
  for (const auto& x : summed.to_triplets()) edges.push_back({x.row, x.col, x.value});
  return WeightedGraph(num_agg, std::move(edges));
}

// Heaviest-first neighbor order with ties broken toward the lowest index.
bool heavier(const Neighbor& a, const Neighbor& b) {
  return a.w != b.w ? a.w > b.w : a.node < b.node;
}

}  // namespace

AggregationResult mwm_aggregate(const WeightedGraph& g, std::span<const int> visit_order) {
  const int n = g.num_nodes();
  if (n < 2) throw Error("mwm_aggregate: need at least two nodes");
  if (!g.positive()) throw Error("mwm_aggregate: weights must be positive");
  if (!is_connected(g)) throw Error("mwm_aggregate: graph is disconnected");

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> queued(n, 0);
  for (int v : visit_order) {
    if (v < 0 || v >= n) throw Error("mwm_aggregate: visit order entry out of range");
    if (!queued[v]) {
      queued[v] = 1;
      order.push_back(v);
    }
  }
  for (int v = 0; v < n; ++v)
    if (!queued[v]) order.push_back(v);

  AggregationResult res;
  res.assign.assign(n, -1);
  std::vector<int> agg_size;
  for (int u : order) {
    if (res.assign[u] >= 0) continue;
    const Neighbor* best = nullptr;
    for (const auto& nb : g.neighbors(u)) {
      if (res.assign[nb.node] >= 0) continue;
      if (best == nullptr || heavier(nb, *best)) best = &nb;
    }
    if (best == nullptr) {
      res.visit_log.push_back({u, -1, 0.0});
      continue;
    }
    res.assign[u] = res.assign[best->node] = static_cast<int>(agg_size.size());
    agg_size.push_back(2);
    res.visit_log.push_back({u, best->node, best->w});
  }

  // A leftover saw all of its neighbors matched, so two leftovers are never
  // adjacent and every leftover has at least one aggregated neighbor.
  std::vector<Neighbor> ranked;
  for (const auto& visit : res.visit_log) {
    if (visit.partner >= 0) continue;
    const int u = visit.visitor;
    ranked.assign(g.neighbors(u).begin(), g.neighbors(u).end());
    std::sort(ranked.begin(), ranked.end(), heavier);
    int target = -1;
    for (const auto& nb : ranked) {
      const int a = res.assign[nb.node];
      if (a >= 0 && agg_size[a] < kMaxAggregateSize) {
        target = a;
        break;
      }
    }
    if (target < 0) {
      for (const auto& nb : ranked) {
        if (res.assign[nb.node] >= 0) {
          target = res.assign[nb.node];
          break;
        }
      }
    }
    if (target < 0) {
      // Unreachable for connected input; kept as a fresh singleton aggregate.
      target = static_cast<int>(agg_size.size());
      agg_size.push_back(0);
    }
    res.assign[u] = target;
    ++agg_size[target];
    ++res.leftovers;
  }

  res.num_aggregates = static_cast<int>(agg_size.size());
  res.coarse = galerkin_graph(g, res.assign, res.num_aggregates);
  return res;
}

bool AggregationHierarchy::pure_matching() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const CoarseningStep& s) { return s.pure_matching; });
}

namespace {

std::uint64_t level_seed(std::uint64_t seed, int level) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(level)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SparseMatrix partition_matrix(std::span<const int> assign, int num_agg) {
  std::vector<Triplet> t;
  t.reserve(assign.size());
  for (std::size_t i = 0; i < assign.size(); ++i) t.push_back({static_cast<int>(i), assign[i], 1.0});
  return SparseMatrix::from_triplets(static_cast<int>(assign.size()), num_agg, std::move(t));
}

}  // namespace

AggregationHierarchy build_hierarchy(const WeightedGraph& g, const HierarchyOptions& opts) {
  if (opts.max_levels && *opts.max_levels < 1) throw Error("build_hierarchy: max_levels must be >= 1");
  AggregationHierarchy h;
  h.seed = opts.seed;
  h.order = opts.order;
  h.graphs.push_back(g);
  if (g.num_nodes() < 2) throw Error("build_hierarchy: need at least two nodes");

  while (true) {
    const int level = h.num_levels() - 1;
    if (opts.max_levels && h.num_levels() >= *opts.max_levels) break;
    const WeightedGraph& fine = h.graphs.back();
    if (level > 0 && fine.num_nodes() <= 2) break;
    if (fine.num_nodes() < 2) break;

    AggregationResult agg;
    if (opts.order == VisitOrder::natural) {
      agg = mwm_aggregate(fine, std::span<const int>{});
    } else {
      agg = mwm_aggregate(fine, level_seed(opts.seed, level));
    }
    if (agg.num_aggregates >= fine.num_nodes()) {
      h.truncated = true;
      break;
    }
    // A one-node coarse level is annihilated by L P and would sit isolated in
    // the expanded graph; only the base level may collapse that far.
    if (agg.num_aggregates == 1 && level > 0) break;
    CoarseningStep step;
    step.fine_size = fine.num_nodes();
    step.coarse_size = agg.num_aggregates;
    step.pure_matching = agg.leftovers == 0;
    step.prolongation = partition_matrix(agg.assign, agg.num_aggregates);
    step.assign = std::move(agg.assign);
    h.steps.push_back(std::move(step));
    h.graphs.push_back(std::move(agg.coarse));
  }
  return h;
}

AggregationHierarchy hierarchy_from_assignments(const WeightedGraph& g,
                                                std::vector<std::vector<int>> assign) {
  AggregationHierarchy h;
  h.graphs.push_back(g);
  for (auto& a : assign) {
    const WeightedGraph& fine = h.graphs.back();
    if (static_cast<int>(a.size()) != fine.num_nodes())
      throw Error("hierarchy_from_assignments: map length does not match the level size");
    int m = 0;
    for (int x : a) {
      if (x < 0) throw Error("hierarchy_from_assignments: negative aggregate id");
      m = std::max(m, x + 1);
    }
    std::vector<int> count(m, 0);
    for (int x : a) ++count[x];
    if (std::count(count.begin(), count.end(), 0) > 0)
      throw Error("hierarchy_from_assignments: aggregate ids are not contiguous");
    CoarseningStep step;
    step.fine_size = fine.num_nodes();
    step.coarse_size = m;
    step.pure_matching = std::all_of(count.begin(), count.end(), [](int c) { return c == 2; });
    step.prolongation = partition_matrix(a, m);
    WeightedGraph coarse = galerkin_graph(fine, a, m);
    step.assign = std::move(a);
    h.steps.push_back(std::move(step));
    h.graphs.push_back(std::move(coarse));
  }
  return h;
}

CompositeProlongation::CompositeProlongation(const AggregationHierarchy& h, double mu)
    : n_(h.base_size()), mu_(mu) {
  if (!(mu > 0.0)) throw Error("composite_prolongation: mu must be positive");
  const int levels = h.num_levels();
  maps_.resize(levels);
  maps_[0].resize(n_);
  std::iota(maps_[0].begin(), maps_[0].end(), 0);
  for (int k = 1; k < levels; ++k) {
    const auto& step = h.steps[k - 1];
    maps_[k].resize(n_);
    for (int i = 0; i < n_; ++i) maps_[k][i] = step.assign[maps_[k - 1][i]];
  }
  offsets_.assign(levels + 1, 0);
  scales_.resize(levels);
  double s = 1.0;
  for (int k = 0; k < levels; ++k) {
    offsets_[k + 1] = offsets_[k] + h.level_size(k);
    scales_[k] = s;
    s *= -mu;
  }
  blocks_.reserve(levels);
  for (int k = 0; k < levels; ++k) blocks_.push_back(unscaled_block(k).scaled(scales_[k]));
}

SparseMatrix CompositeProlongation::unscaled_block(int level) const {
  const int cols = offsets_.at(level + 1) - offsets_.at(level);
  return partition_matrix(maps_.at(level), cols);
}

std::vector<double> CompositeProlongation::apply(std::span<const double> x_tilde) const {
  if (static_cast<int>(x_tilde.size()) != n_tilde())
    throw Error("CompositeProlongation::apply: expected length " + std::to_string(n_tilde()));
  std::vector<double> x(n_, 0.0);
  for (int k = 0; k < num_levels(); ++k) {
    const auto& map = maps_[k];
    const int off = offsets_[k];
    for (int i = 0; i < n_; ++i) x[i] += scales_[k] * x_tilde[off + map[i]];
  }
  return x;
}

std::vector<double> CompositeProlongation::apply_transpose(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != n_)
    throw Error("CompositeProlongation::apply_transpose: expected length " + std::to_string(n_));
  std::vector<double> bt(n_tilde(), 0.0);
  for (int k = 0; k < num_levels(); ++k) {
    const auto& map = maps_[k];
    const int off = offsets_[k];
    for (int i = 0; i < n_; ++i) bt[off + map[i]] += scales_[k] * b[i];
  }
  return bt;
}

SparseMatrix CompositeProlongation::to_sparse() const {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n_) * num_levels());
  for (int k = 0; k < num_levels(); ++k)
    for (int i = 0; i < n_; ++i) t.push_back({i, offsets_[k] + maps_[k][i], scales_[k]});
  return SparseMatrix::from_triplets(n_, n_tilde(), std::move(t));
}

CompositeProlongation composite_prolongation(const AggregationHierarchy& h, double mu) {
  return CompositeProlongation(h, mu);
}

}  // namespace lapcond
