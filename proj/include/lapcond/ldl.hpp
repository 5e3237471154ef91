#pragma once

#include "lapcond/sparse_matrix.hpp"

#include <span>
#include <vector>

namespace lapcond {

/// Square-root-free sparse Cholesky factorization P A P^T = L D L^T of a
/// symmetric positive definite matrix (up-looking, elimination-tree based).
///
/// Fill is tracked per elimination step: fill_per_step()[k] is the number of
/// nonzeros in column k of L that have no counterpart in P A P^T.
class SparseLdl {
 public:
  /// `order[k]` is the row/column of `a` eliminated at step k. Throws Error on
  /// a pivot below pivot_tolerance times the original diagonal entry.
  SparseLdl(const SparseMatrix& a, std::vector<int> order, double pivot_tolerance = 1e-13);

  int size() const { return n_; }
  std::span<const int> order() const { return order_; }
  std::span<const int> fill_per_step() const { return fill_; }
  std::size_t factor_nnz() const { return lx_.size(); }
  std::size_t fill_in() const;
  std::span<const double> pivots() const { return d_; }

  /// Overwrites b with A^{-1} b.
  void solve(std::span<double> b) const;

 private:
  int n_ = 0;
  std::vector<int> order_;
  std::vector<int> fill_;
  std::vector<int> lp_;
  std::vector<int> li_;
  std::vector<double> lx_;
  std::vector<double> d_;
};

/// Approximate minimum degree ordering of a symmetric pattern.
std::vector<int> minimum_degree_order(const SparseMatrix& a);

}  // namespace lapcond
