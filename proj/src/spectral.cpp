#include "lapcond/spectral.hpp"

#include "lapcond/generators.hpp"
#include "lapcond/laplacian.hpp"
#include "lapcond/ldl.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace lapcond {

namespace {

void require_ones_kernel(const SparseMatrix& m, const char* name) {
  const std::vector<double> ones(m.ncols(), 1.0);
  const auto y = m * ones;
  double worst = 0.0;
  for (double v : y) worst = std::max(worst, std::abs(v));
  if (worst > 1e-9 * std::max(m.max_abs(), 1.0))
    throw Error(std::string("generalized_pencil: ") + name + " does not annihilate the ones vector");
}

// Grounding on the heaviest diagonal of B: after the diagonal scaling below,
// that is where the ones vector has its largest component, so removing it
// separates span{1} cleanly even when level scales span many decades.
int ground_index(const SparseMatrix& b) {
  int best = 0;
  for (int i = 1; i < b.nrows(); ++i)
    if (b.at(i, i) > b.at(best, best)) best = i;
  return best;
}

SparseMatrix drop_index(const SparseMatrix& m, int g) {
  const int k = m.nrows() - 1;
  std::vector<Triplet> t;
  t.reserve(m.nnz());
  for (auto x : m.to_triplets()) {
    if (x.row == g || x.col == g) continue;
    if (x.row > g) --x.row;
    if (x.col > g) --x.col;
    t.push_back(x);
  }
  return SparseMatrix::from_triplets(k, k, std::move(t), true);
}

// Eigenvalues of A v = lambda B v for B positive definite, ascending. Both are
// first scaled by diag(B)^{-1/2}, a congruence that leaves the spectrum alone
// and evens out the (-mu)^k level scales before the Cholesky step.
Eigen::VectorXd definite_pencil_values(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  if ((b.diagonal().array() <= 0.0).any())
    throw Error("generalized_pencil: B has a kernel larger than span{1} (disconnected graph)");
  const Eigen::VectorXd d = b.diagonal().cwiseSqrt().cwiseInverse();
  a = d.asDiagonal() * a * d.asDiagonal();
  b = d.asDiagonal() * b * d.asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success)
    throw Error("generalized_pencil: B has a kernel larger than span{1} (disconnected graph)");
  const Eigen::MatrixXd& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    if (!(l(i, i) * l(i, i) > 1e-12))
      throw Error("generalized_pencil: B has a kernel larger than span{1} (disconnected graph)");
  auto lower = llt.matrixL();
  Eigen::MatrixXd x = lower.solve(a);
  Eigen::MatrixXd c = lower.solve(x.transpose());
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void finish(PencilSpectrum& s) {
  if (!(s.lambda_min_nonzero > 0.0)) throw Error("generalized_pencil: A is zero on the pencil");
  s.kappa = s.lambda_max / s.lambda_min_nonzero;
}

PencilSpectrum dense_pencil(const SparseMatrix& a, const SparseMatrix& b) {
  PencilSpectrum s;
  const int g = ground_index(b);
  const Eigen::MatrixXd ad = drop_index(a, g).to_dense();
  const Eigen::MatrixXd bd = drop_index(b, g).to_dense();
  const Eigen::VectorXd lam = definite_pencil_values(ad, bd);
  s.eigenvalues.assign(lam.data(), lam.data() + lam.size());
  const double top = lam.cwiseAbs().maxCoeff();
  s.zero_threshold = kZeroThreshold * top;
  int zeros = 0;
  s.lambda_min_nonzero = 0.0;
  for (double v : s.eigenvalues) {
    if (std::abs(v) <= s.zero_threshold) {
      ++zeros;
    } else if (v > 0.0 && s.lambda_min_nonzero == 0.0) {
      s.lambda_min_nonzero = v;
    }
  }
  s.lambda_max = lam(lam.size() - 1);
  s.null_dim_A = zeros + 1;
  s.lambda_min_lower = s.lambda_min_nonzero;
  s.lambda_max_upper = s.lambda_max;
  finish(s);
  return s;
}

// Lanczos on B^{-1} A in the B inner product, started inside the range of
// B^{-1} A so the kernel of A never enters the Krylov space.
PencilSpectrum iterative_pencil(const SparseMatrix& a_full, const SparseMatrix& b_full,
                                double tol) {
  const int g = ground_index(b_full);
  const SparseMatrix a = drop_index(a_full, g);
  const SparseMatrix b = drop_index(b_full, g);
  const int n = a.nrows();
  const SparseLdl factor(b, minimum_degree_order(b));

  PencilSpectrum s;
  auto b_dot = [&](const std::vector<double>& x, const std::vector<double>& bx) {
    return dot(x, bx);
  };

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  std::vector<double> r(n);
  for (auto& v : r) v = gauss(rng);
  std::vector<double> q = a * r;
  factor.solve(q);
  ++s.matvecs;

  std::vector<std::vector<double>> qs, bqs;
  std::vector<double> alpha, beta;
  std::vector<double> bq = b * q;
  double nrm = std::sqrt(std::max(b_dot(q, bq), 0.0));
  if (nrm == 0.0) throw Error("generalized_pencil: A is zero on the pencil");
  for (auto& v : q) v /= nrm;
  for (auto& v : bq) v /= nrm;

  const int max_steps = std::min(n, kLanczosMatvecCap);
  double theta_min = 0.0, theta_max = 0.0, res_min = 0.0, res_max = 0.0;
  bool exhausted = false;
  for (int j = 0; j < max_steps; ++j) {
    qs.push_back(q);
    bqs.push_back(bq);
    std::vector<double> aq = a * q;
    alpha.push_back(dot(q, aq));
    std::vector<double> w = aq;
    factor.solve(w);
    ++s.matvecs;
    // Full reorthogonalization (twice) against every stored vector.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < qs.size(); ++i) {
        const double c = dot(w, bqs[i]);
        for (int k = 0; k < n; ++k) w[k] -= c * qs[i][k];
      }
    std::vector<double> bw = b * w;
    const double bnext = std::sqrt(std::max(dot(w, bw), 0.0));

    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub(std::max(m - 1, 0));
    for (int i = 0; i + 1 < m; ++i) sub(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto& th = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    const double top = th.cwiseAbs().maxCoeff();
    const double thr = kZeroThreshold * top;
    int imin = -1;
    for (int i = 0; i < m; ++i)
      if (th(i) > thr) {
        imin = i;
        break;
      }
    theta_max = th(m - 1);
    res_max = bnext * std::abs(vecs(m - 1, m - 1));
    if (imin >= 0) {
      theta_min = th(imin);
      res_min = bnext * std::abs(vecs(m - 1, imin));
    }
    s.eigenvalues.assign(th.data(), th.data() + m);

    if (bnext <= 1e-12 * std::max(top, 1.0)) {
      exhausted = true;
      break;
    }
    if (imin >= 0 && m >= 2 && res_max <= tol * std::abs(theta_max) &&
        res_min <= tol * std::abs(theta_min))
      break;
    beta.push_back(bnext);
    for (int k = 0; k < n; ++k) {
      w[k] /= bnext;
      bw[k] /= bnext;
    }
    q = std::move(w);
    bq = std::move(bw);
  }

  s.lambda_max = theta_max;
  s.lambda_min_nonzero = theta_min;
  s.zero_threshold = kZeroThreshold * std::abs(theta_max);
  if (exhausted) {
    res_min = res_max = 0.0;
  }
  s.converged = exhausted || (res_max <= tol * std::abs(theta_max) &&
                              res_min <= tol * std::abs(theta_min));
  s.lambda_max_upper = theta_max + res_max;
  s.lambda_min_lower = std::max(theta_min - res_min, 0.0);
  s.null_dim_A = -1;
  finish(s);
  return s;
}

}  // namespace

PencilSpectrum generalized_pencil(const SparseMatrix& a, const SparseMatrix& b, PencilMode mode,
                                  double tol) {
  if (a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows())
    throw Error("generalized_pencil: size mismatch (" + std::to_string(a.nrows()) + " vs " +
                std::to_string(b.nrows()) + ")");
  if (a.nrows() < 2) throw Error("generalized_pencil: need at least two rows");
  require_ones_kernel(a, "A");
  require_ones_kernel(b, "B");
  if (!is_connected(graph_from_laplacian(b)))
    throw Error("generalized_pencil: B has a kernel larger than span{1} (disconnected graph)");
  if (mode == PencilMode::dense) {
    if (a.nrows() > kDenseLimit)
      throw Error("generalized_pencil: " + std::to_string(a.nrows()) +
                  " rows exceeds the dense limit; use iterative mode");
    return dense_pencil(a, b);
  }
  return iterative_pencil(a, b, tol);
}

int nullspace_dim(const SparseMatrix& a, double threshold) {
  if (a.nrows() != a.ncols()) throw Error("nullspace_dim: matrix is not square");
  if (a.nrows() == 0) return 0;
  Eigen::MatrixXd d = a.to_dense();
  d = 0.5 * (d + d.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd sv = es.eigenvalues().cwiseAbs();
  const double cut = threshold * sv.maxCoeff();
  return static_cast<int>((sv.array() <= cut).count());
}

double rho_estimate(const ExpandedSystem& sys) {
  const auto& p = sys.prolongation;
  const int n = p.n();
  const int nt = p.n_tilde();
  if (n < 2) return 0.0;
  // Columns P(mu)^T (e_i - e_last) span the complement of Null(L_expanded).
  std::vector<Triplet> t;
  for (int k = 0; k < p.num_levels(); ++k) {
    const auto map = p.level_map(k);
    const int off = p.offsets()[k];
    const double s = p.scale(k);
    for (int i = 0; i + 1 < n; ++i) {
      t.push_back({off + map[i], i, s});
      t.push_back({off + map[n - 1], i, -s});
    }
  }
  const SparseMatrix m = SparseMatrix::from_triplets(nt, n - 1, std::move(t));
  const SparseMatrix mt = m.transpose();
  const Eigen::MatrixXd h = multiply(mt, multiply(sys.L_pegp, m)).to_dense();
  const Eigen::MatrixXd neg = multiply(mt, multiply(sys.L_neg, m)).to_dense();
  if (neg.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::VectorXd lam;
  try {
    lam = definite_pencil_values(neg, 0.5 * (h + h.transpose()));
  } catch (const Error&) {
    throw Error("rho_estimate: PEGP graph is disconnected on the range of the expanded Laplacian");
  }
  return std::max(lam(lam.size() - 1), 0.0);
}

double MuRule::resolve(int n) const {
  return inv_sqrt_n ? 1.0 / std::sqrt(static_cast<double>(n)) : value;
}

std::vector<ConditionRow> condition_table(const ConditionTableOptions& opts) {
  std::vector<ConditionRow> rows;
  for (int n : opts.sizes) {
    ConditionRow row;
    WeightedGraph g;
    if (opts.family == GraphFamily::grid2d) {
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
      if (side * side != n) throw Error("condition_table: grid size must be a perfect square");
      g = gen_grid2d(side);
      row.family = "grid2d";
    } else {
      g = gen_ring(n, opts.ring_degree);
      row.family = "ring";
    }
    const auto h = build_hierarchy(g, {opts.levels, opts.seed, opts.order});
    const double mu = opts.mu.resolve(n);
    const auto sys = expand_laplacian(build_laplacian(g), composite_prolongation(h, mu));
    const auto spec = generalized_pencil(sys.L_expanded, sys.L_pegp, PencilMode::dense);
    row.n = n;
    row.levels = h.num_levels();
    row.n_tilde = sys.n_tilde();
    row.mu = mu;
    row.kappa = spec.kappa;
    row.lambda_max = spec.lambda_max;
    row.lambda_min = spec.lambda_min_nonzero;
    row.seed = opts.seed;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lapcond
