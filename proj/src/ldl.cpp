#include "lapcond/ldl.hpp"

#include "lapcond/graph.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lapcond {

SparseLdl::SparseLdl(const SparseMatrix& a, std::vector<int> order, double pivot_tolerance)
    : n_(a.nrows()), order_(std::move(order)) {
  if (a.nrows() != a.ncols()) throw Error("SparseLdl: matrix is not square");
  if (static_cast<int>(order_.size()) != n_) throw Error("SparseLdl: ordering has wrong length");
  std::vector<int> pinv(n_, -1);
  for (int k = 0; k < n_; ++k) {
    const int i = order_[k];
    if (i < 0 || i >= n_ || pinv[i] >= 0) throw Error("SparseLdl: ordering is not a permutation");
    pinv[i] = k;
  }

  // Symbolic: elimination tree and column counts of L.
  std::vector<int> parent(n_, -1);
  std::vector<int> flag(n_, -1);
  std::vector<int> lnz(n_, 0);
  std::vector<int> original_lower(n_, 0);
  for (int k = 0; k < n_; ++k) {
    flag[k] = k;
    for (int j : a.row_cols(order_[k])) {
      int i = pinv[j];
      if (i >= k) continue;
      ++original_lower[i];
      for (; flag[i] != k; i = parent[i]) {
        if (parent[i] == -1) parent[i] = k;
        ++lnz[i];
        flag[i] = k;
      }
    }
  }
  lp_.assign(n_ + 1, 0);
  for (int k = 0; k < n_; ++k) lp_[k + 1] = lp_[k] + lnz[k];
  fill_.resize(n_);
  for (int k = 0; k < n_; ++k) fill_[k] = lnz[k] - original_lower[k];
  li_.resize(lp_[n_]);
  lx_.resize(lp_[n_]);
  d_.resize(n_);


  // Numeric, one row of L at a time.
  std::vector<double> y(n_, 0.0);
  std::vector<int> pattern(n_);
  std::fill(flag.begin(), flag.end(), -1);
  std::fill(lnz.begin(), lnz.end(), 0);
  for (int k = 0; k < n_; ++k) {
    int top = n_;
    flag[k] = k;
    auto cols = a.row_cols(order_[k]);
    auto vals = a.row_values(order_[k]);
    for (std::size_t q = 0; q < cols.size(); ++q) {
      int i = pinv[cols[q]];
      if (i > k) continue;
      y[i] += vals[q];
      int len = 0;
      for (; flag[i] != k; i = parent[i]) {
        pattern[len++] = i;
        flag[i] = k;
      }
      while (len > 0) pattern[--top] = pattern[--len];
    }
    d_[k] = y[k];
    y[k] = 0.0;
    for (; top < n_; ++top) {
      const int i = pattern[top];
      const double yi = y[i];
      y[i] = 0.0;
      const int end = lp_[i] + lnz[i];
      for (int p = lp_[i]; p < end; ++p) y[li_[p]] -= lx_[p] * yi;
      const double lki = yi / d_[i];
      d_[k] -= lki * yi;
      li_[end] = k;
      lx_[end] = lki;
      ++lnz[i];
    }
    // Relative to the row's own diagonal: levels of an expanded system differ
    // in scale by powers of mu, so a global floor would reject coarse rows.
    if (!(d_[k] > pivot_tolerance * std::abs(a.at(order_[k], order_[k]))))
      throw Error("SparseLdl: pivot " + std::to_string(d_[k]) + " at step " + std::to_string(k) +
                  " (row " + std::to_string(order_[k]) + ") is below the tolerance");
  }
}

std::size_t SparseLdl::fill_in() const {
  return static_cast<std::size_t>(std::accumulate(fill_.begin(), fill_.end(), 0LL));
}

void SparseLdl::solve(std::span<double> b) const {
  if (static_cast<int>(b.size()) != n_) throw Error("SparseLdl::solve: length mismatch");
  std::vector<double> y(n_);
  for (int k = 0; k < n_; ++k) y[k] = b[order_[k]];
  for (int j = 0; j < n_; ++j)
    for (int p = lp_[j]; p < lp_[j + 1]; ++p) y[li_[p]] -= lx_[p] * y[j];
  for (int j = 0; j < n_; ++j) y[j] /= d_[j];
  for (int j = n_ - 1; j >= 0; --j)
    for (int p = lp_[j]; p < lp_[j + 1]; ++p) y[j] -= lx_[p] * y[li_[p]];
  for (int k = 0; k < n_; ++k) b[order_[k]] = y[k];
}

std::vector<int> minimum_degree_order(const SparseMatrix& a) {
  const int n = a.nrows();
  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(a.nnz());
  for (const auto& x : a.to_triplets()) t.emplace_back(x.row, x.col, x.value);
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
  Eigen::AMDOrdering<int> amd;
  amd(m, perm);
  return {perm.indices().data(), perm.indices().data() + perm.indices().size()};
}

}  // namespace lapcond
