#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace lapcond {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row sparse matrix.
///
/// Column indices are strictly increasing within each row and no explicit
/// zeros are stored. The `symmetric` flag is a promise made by the assembler
/// (mirrored assembly); it is not re-verified on every operation.
class SparseMatrix {
 public:
  /// Entries with magnitude below this are dropped during assembly.
  static constexpr double kDropTolerance = 1e-300;

  SparseMatrix() = default;
  SparseMatrix(int nrows, int ncols) : nrows_(nrows), ncols_(ncols), row_ptr_(nrows + 1, 0) {}

  /// Duplicates are summed; entries below kDropTolerance after summation vanish.
  static SparseMatrix from_triplets(int nrows, int ncols, std::vector<Triplet> triplets,
                                    bool symmetric = false);
  static SparseMatrix identity(int n);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense, bool symmetric = false);

  int nrows() const { return nrows_; }
  int ncols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }
  bool symmetric() const { return symmetric_; }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const int> row_cols(int i) const {
    return {col_idx_.data() + row_ptr_[i], col_idx_.data() + row_ptr_[i + 1]};
  }
  std::span<const double> row_values(int i) const {
    return {values_.data() + row_ptr_[i], values_.data() + row_ptr_[i + 1]};
  }

  double at(int i, int j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double alpha) const;
  /// Copy without entries whose magnitude is <= tol.
  SparseMatrix pruned(double tol) const;
  double max_abs() const;

  Eigen::MatrixXd to_dense() const;
  std::vector<Triplet> to_triplets() const;

 private:
  int nrows_ = 0;
  int ncols_ = 0;
  bool symmetric_ = false;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// C = A B (Gustavson row-by-row product).
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

/// C = alpha A + beta B
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                 double beta = 1.0);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace lapcond
