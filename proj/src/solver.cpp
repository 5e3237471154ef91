#include "lapcond/solver.hpp"

#include "lapcond/graph.hpp"
#include "lapcond/laplacian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace lapcond {

std::string to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::none: return "none";
    case PreconditionerKind::pegp: return "pegp";
    case PreconditionerKind::msp: return "msp";
    case PreconditionerKind::custom: return "custom";
  }
  return "?";
}

PreconditionerKind parse_preconditioner_kind(const std::string& name) {
  if (name == "none") return PreconditionerKind::none;
  if (name == "pegp") return PreconditionerKind::pegp;
  if (name == "msp") return PreconditionerKind::msp;
  if (name == "custom") return PreconditionerKind::custom;
  throw Error("unknown preconditioner '" + name + "' (expected pegp, msp or none)");
}

namespace {

void check_laplacian(const SparseMatrix& l) {
  if (l.nrows() != l.ncols()) throw Error("build_preconditioner: matrix is not square");
  if (l.nrows() < 1) throw Error("build_preconditioner: empty matrix");
  const double scale = std::max(l.max_abs(), 1.0);
  for (int i = 0; i < l.nrows(); ++i) {
    auto cols = l.row_cols(i);
    auto vals = l.row_values(i);
    double sum = 0.0;
    for (std::size_t q = 0; q < cols.size(); ++q) {
      sum += vals[q];
      if (static_cast<int>(cols[q]) != i && vals[q] > 0.0)
        throw Error("build_preconditioner: positive off-diagonal at row " + std::to_string(i) +
                    "; not a positive-graph Laplacian");
    }
    if (std::abs(sum) > 1e-10 * scale)
      throw Error("build_preconditioner: row " + std::to_string(i) + " does not sum to zero");
  }
  if (!is_connected(graph_from_laplacian(l)))
    throw Error("build_preconditioner: Laplacian graph is disconnected");
}

// Heaviest diagonal, ties to the highest index. On an expanded system the
// diagonals shrink like mu^(2k) up the levels; grounding a coarse node leaves
// the ones direction almost in the kernel of the grounded matrix and the
// factorization loses every digit, so a base node is the better choice.
int pick_ground(const SparseMatrix& l) {
  int best = l.nrows() - 1;
  for (int i = l.nrows() - 2; i >= 0; --i)
    if (l.at(i, i) > l.at(best, best)) best = i;
  return best;
}

SparseMatrix drop_index(const SparseMatrix& l, int g) {
  const int m = l.nrows() - 1;
  std::vector<Triplet> t;
  t.reserve(l.nnz());
  for (auto x : l.to_triplets()) {
    if (x.row == g || x.col == g) continue;
    if (x.row > g) --x.row;
    if (x.col > g) --x.col;
    t.push_back(x);
  }
  return SparseMatrix::from_triplets(m, m, std::move(t), true);
}

}  // namespace

Preconditioner build_preconditioner(const SparseMatrix& laplacian, PreconditionerKind kind,
                                    std::optional<std::vector<int>> order) {
  Preconditioner p;
  p.kind_ = kind;
  p.matrix_ = laplacian;
  if (kind == PreconditionerKind::none) return p;
  check_laplacian(laplacian);

  const int n = laplacian.nrows();
  p.ground_ = pick_ground(laplacian);
  if (n == 1) return p;
  const SparseMatrix grounded = drop_index(laplacian, p.ground_);

  std::vector<int> elim;
  if (order) {
    if (static_cast<int>(order->size()) != n)
      throw Error("build_preconditioner: ordering has wrong length");
    for (int v : *order)
      if (v != p.ground_) elim.push_back(v > p.ground_ ? v - 1 : v);
  } else if (kind == PreconditionerKind::pegp) {
    elim = minimum_degree_order(grounded);
  } else if (kind == PreconditionerKind::msp) {
    throw Error("build_preconditioner: msp needs an elimination order");
  } else {
    elim.resize(n - 1);
    std::iota(elim.begin(), elim.end(), 0);
  }
  p.factor_.emplace(grounded, std::move(elim));
  return p;
}

std::vector<double> Preconditioner::apply(std::span<const double> r) const {
  std::vector<double> z(r.size());
  apply(r, z);
  return z;
}

void Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != z.size()) throw Error("Preconditioner::apply: output length mismatch");
  if (kind_ == PreconditionerKind::none) {
    std::copy(r.begin(), r.end(), z.begin());
    return;
  }
  const int n = size();
  if (static_cast<int>(r.size()) != n)
    throw Error("Preconditioner::apply: expected length " + std::to_string(n));
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
  std::vector<double> y;
  y.reserve(n - 1);
  for (int i = 0; i < n; ++i)
    if (i != ground_) y.push_back(r[i] - mean);
  if (factor_) factor_->solve(y);
  for (int i = 0, k = 0; i < n; ++i) z[i] = i == ground_ ? 0.0 : y[k++];
  const double shift = std::accumulate(z.begin(), z.end(), 0.0) / n;
  for (auto& v : z) v -= shift;
}

SolveResult fgmres(const SparseMatrix& a, std::span<const double> b_in, const Preconditioner* p,
                   const FgmresOptions& opts) {
  const int n = a.nrows();
  if (a.ncols() != n || static_cast<int>(b_in.size()) != n)
    throw Error("fgmres: dimension mismatch");
  if (p && p->kind() != PreconditionerKind::none && p->size() != n)
    throw Error("fgmres: preconditioner size mismatch");
  if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw Error("fgmres: tolerance must lie in (0,1)");

  SolveResult out;
  auto& rep = out.report;
  rep.relative_tolerance = opts.tol;
  rep.restart = opts.restart;
  rep.preconditioner_kind = p ? p->kind() : PreconditionerKind::none;

  std::vector<double> b(b_in.begin(), b_in.end());
  if (opts.project_ones && n > 0) {
    const double mean = std::accumulate(b.begin(), b.end(), 0.0) / n;
    for (auto& v : b) v -= mean;
  }
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  rep.residual_history.push_back(1.0);
  if (bnorm == 0.0) {
    rep.converged = true;
    return out;
  }

  const auto start = std::chrono::steady_clock::now();
  const double target = opts.tol * bnorm;
  std::vector<double> r = b;  // x0 = 0
  double rnorm = bnorm;
  int total = 0;

  while (total < opts.max_iter) {
    const int cycle = opts.restart > 0 ? std::min(opts.restart, opts.max_iter - total)
                                       : opts.max_iter - total;
    std::vector<std::vector<double>> v, z;
    v.reserve(cycle + 1);
    z.reserve(cycle);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cycle + 1, cycle);
    std::vector<double> cs(cycle), sn(cycle), g(cycle + 1, 0.0);
    g[0] = rnorm;
    v.emplace_back(r);
    for (auto& e : v[0]) e /= rnorm;

    int j = 0;
    bool stop = false;
    for (; j < cycle && !stop; ++j) {
      z.emplace_back(n);
      if (p) {
        p->apply(v[j], z[j]);
      } else {
        z[j] = v[j];
      }
      std::vector<double> w(n);
      a.multiply(z[j], w);
      const double wnorm0 = norm2(w);
      // Modified Gram-Schmidt, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const double hij = dot(w, v[i]);
          h(i, j) += hij;
          for (int k = 0; k < n; ++k) w[k] -= hij * v[i][k];
        }
      }
      const double hnext = norm2(w);
      h(j + 1, j) = hnext;
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = h(j, j) / denom;
        sn[j] = h(j + 1, j) / denom;
      }
      h(j, j) = denom;
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      rep.residual_history.push_back(std::abs(g[j + 1]) / bnorm);
      ++total;

      if (hnext <= 1e-14 * std::max(wnorm0, 1.0)) {
        rep.breakdown = true;
        stop = true;
      } else if (std::abs(g[j + 1]) <= target) {
        stop = true;
      } else {
        v.emplace_back(std::move(w));
        for (auto& e : v.back()) e /= hnext;
      }
    }

    // Least-squares update over the j directions built in this cycle.
    int k = j;
    while (k > 0 && h(k - 1, k - 1) == 0.0) --k;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int c = i + 1; c < k; ++c) s -= h(i, c) * y(c);
      y(i) = s / h(i, i);
    }
    for (int i = 0; i < k; ++i)
      for (int e = 0; e < n; ++e) out.x[e] += y(i) * z[i][e];

    a.multiply(out.x, r);
    for (int e = 0; e < n; ++e) r[e] = b[e] - r[e];
    rnorm = norm2(r);
    if (rnorm <= target) {
      rep.converged = true;
      break;
    }
    if (rep.breakdown) break;
  }

  rep.iterations = total;
  rep.true_relative_residual = rnorm / bnorm;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace lapcond
