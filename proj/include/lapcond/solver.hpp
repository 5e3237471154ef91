#pragma once

#include "lapcond/ldl.hpp"
#include "lapcond/sparse_matrix.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lapcond {

enum class PreconditionerKind { none, pegp, msp, custom };

std::string to_string(PreconditionerKind kind);
PreconditionerKind parse_preconditioner_kind(const std::string& name);

/// z = R r with R a pseudoinverse of a connected-graph Laplacian, realized by
/// grounding one node (the heaviest diagonal) and factorizing what remains.
///
/// Immutable once built; apply() allocates its own workspace.
class Preconditioner {
 public:
  /// Identity map (kind none).
  Preconditioner() = default;

  PreconditionerKind kind() const { return kind_; }
  const SparseMatrix& matrix() const { return matrix_; }
  /// Nullptr for kind none.
  const SparseLdl* factorization() const { return factor_ ? &*factor_ : nullptr; }
  int ground_node() const { return ground_; }
  std::size_t fill_in_count() const { return factor_ ? factor_->fill_in() : 0; }
  int size() const { return matrix_.nrows(); }

  std::vector<double> apply(std::span<const double> r) const;
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  friend Preconditioner build_preconditioner(const SparseMatrix&, PreconditionerKind,
                                             std::optional<std::vector<int>>);
  PreconditionerKind kind_ = PreconditionerKind::none;
  SparseMatrix matrix_;
  std::optional<SparseLdl> factor_;
  int ground_ = -1;
};

/// `order` lists all nodes of `laplacian` in elimination order; the ground
/// node is dropped from it. Without an order, pegp uses minimum degree and
/// custom uses the natural order. msp requires an order.
///
/// Throws Error for a disconnected or non-Laplacian matrix and for a pivot
/// that vanishes after grounding.
Preconditioner build_preconditioner(const SparseMatrix& laplacian, PreconditionerKind kind,
                                    std::optional<std::vector<int>> order = std::nullopt);

struct FgmresOptions {
  double tol = 1e-8;
  int max_iter = 1000;
  int restart = 0;  ///< 0: never restart
  /// Remove the component of b along the all-ones vector first (Laplacian systems).
  bool project_ones = true;
};

struct SolveReport {
  int iterations = 0;
  /// ||r_k|| / ||b|| as tracked by the Arnoldi least-squares problem, starting at 1.
  std::vector<double> residual_history;
  bool converged = false;
  bool breakdown = false;
  double relative_tolerance = 0.0;
  double true_relative_residual = 0.0;
  double wall_time = 0.0;  ///< seconds spent in the iteration
  PreconditionerKind preconditioner_kind = PreconditionerKind::none;
  int restart = 0;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Right-preconditioned flexible GMRES from x0 = 0. Stops on the true residual
/// ||b - A x|| <= tol ||b||. A null preconditioner means none.
SolveResult fgmres(const SparseMatrix& a, std::span<const double> b, const Preconditioner* p,
                   const FgmresOptions& opts = {});

}  // namespace lapcond
