#include "lapcond/sparse_matrix.hpp"

#include "lapcond/graph.hpp"

#include <algorithm>
#include <cmath>

namespace lapcond {

SparseMatrix SparseMatrix::from_triplets(int nrows, int ncols, std::vector<Triplet> triplets,
                                         bool symmetric) {
  if (nrows < 0 || ncols < 0) throw Error("SparseMatrix: negative dimension");
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw Error("SparseMatrix: triplet index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m(nrows, ncols);
  m.symmetric_ = symmetric;
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t k = 0;
  for (int i = 0; i < nrows; ++i) {
    while (k < triplets.size() && triplets[k].row == i) {
      const int j = triplets[k].col;
      double sum = 0.0;
      while (k < triplets.size() && triplets[k].row == i && triplets[k].col == j)
        sum += triplets[k++].value;
      if (std::abs(sum) >= kDropTolerance) {
        m.col_idx_.push_back(j);
        m.values_.push_back(sum);
      }
    }
    m.row_ptr_[i + 1] = static_cast<int>(m.col_idx_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t), true);
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense, bool symmetric) {
  std::vector<Triplet> t;
  for (int i = 0; i < dense.rows(); ++i)
    for (int j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != 0.0) t.push_back({i, j, dense(i, j)});
  return from_triplets(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()),
                       std::move(t), symmetric);
}

double SparseMatrix::at(int i, int j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + (it - cols.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != ncols_ || static_cast<int>(y.size()) != nrows_)
    throw Error("SparseMatrix::multiply: dimension mismatch");
  for (int i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(nrows_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(ncols_, nrows_);
  t.symmetric_ = symmetric_;
  std::vector<int> count(ncols_ + 1, 0);
  for (int c : col_idx_) ++count[c + 1];
  for (int j = 0; j < ncols_; ++j) count[j + 1] += count[j];
  t.row_ptr_ = count;
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  for (int i = 0; i < nrows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int dst = count[col_idx_[k]]++;
      t.col_idx_[dst] = i;
      t.values_[dst] = values_[k];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::scaled(double alpha) const {
  if (alpha == 0.0) return SparseMatrix(nrows_, ncols_);
  SparseMatrix s = *this;
  for (auto& v : s.values_) v *= alpha;
  return s;
}

SparseMatrix SparseMatrix::pruned(double tol) const {
  SparseMatrix p(nrows_, ncols_);
  p.symmetric_ = symmetric_;
  for (int i = 0; i < nrows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (std::abs(values_[k]) > tol) {
        p.col_idx_.push_back(col_idx_[k]);
        p.values_.push_back(values_[k]);
      }
    }
    p.row_ptr_[i + 1] = static_cast<int>(p.col_idx_.size());
  }
  return p;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nrows_, ncols_);
  for (int i = 0; i < nrows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (int i = 0; i < nrows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.push_back({i, col_idx_[k], values_[k]});
  return t;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.ncols() != b.nrows()) throw Error("multiply: inner dimension mismatch");
  std::vector<Triplet> out;
  std::vector<double> acc(b.ncols(), 0.0);
  std::vector<int> marker(b.ncols(), -1);
  std::vector<int> pattern;
  for (int i = 0; i < a.nrows(); ++i) {
    pattern.clear();
    auto acols = a.row_cols(i);
    auto avals = a.row_values(i);
    for (std::size_t p = 0; p < acols.size(); ++p) {
      const int k = acols[p];
      auto bcols = b.row_cols(k);
      auto bvals = b.row_values(k);
      for (std::size_t q = 0; q < bcols.size(); ++q) {
        const int j = bcols[q];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          pattern.push_back(j);
        }
        acc[j] += avals[p] * bvals[q];
      }
    }
    for (int j : pattern) out.push_back({i, j, acc[j]});
  }
  return SparseMatrix::from_triplets(a.nrows(), b.ncols(), std::move(out));
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols()) throw Error("add: dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  for (auto x : a.to_triplets()) t.push_back({x.row, x.col, alpha * x.value});
  for (auto x : b.to_triplets()) t.push_back({x.row, x.col, beta * x.value});
  return SparseMatrix::from_triplets(a.nrows(), a.ncols(), std::move(t),
                                     a.symmetric() && b.symmetric());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace lapcond
