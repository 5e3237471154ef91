#pragma once

#include "lapcond/aggregation.hpp"
#include "lapcond/expansion.hpp"
#include "lapcond/sparse_matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lapcond {

enum class PencilMode { dense, iterative };

/// Spectrum of the pencil A v = lambda B v where B is a connected-graph
/// Laplacian and A shares its kernel vector 1. Zero eigenvalues (directions in
/// Null(A)) are reported in `eigenvalues` but excluded from kappa.
struct PencilSpectrum {
  std::vector<double> eigenvalues;  ///< ascending; dense: all n-1 values, iterative: Ritz values
  double lambda_max = 0.0;
  double lambda_min_nonzero = 0.0;
  double kappa = 0.0;
  int null_dim_A = -1;  ///< -1 when not computed (iterative mode)
  int null_dim_B = 1;
  double zero_threshold = 0.0;
  bool converged = true;  ///< iterative: both extremes met the tolerance
  /// Iterative mode: lambda_min_nonzero >= lower and lambda_max <= upper are
  /// guaranteed brackets from the Ritz residuals. Dense: equal to the values.
  double lambda_min_lower = 0.0;
  double lambda_max_upper = 0.0;
  int matvecs = 0;
};

inline constexpr double kZeroThreshold = 1e-10;
inline constexpr int kLanczosMatvecCap = 5000;
inline constexpr int kDenseLimit = 4000;

/// Throws Error on size mismatch, when B has more than span{1} in its
/// kernel, or when 1 is not in the kernel of A and B.
PencilSpectrum generalized_pencil(const SparseMatrix& a, const SparseMatrix& b,
                                  PencilMode mode = PencilMode::dense, double tol = 1e-6);

/// Number of singular values of symmetric A at or below threshold * sigma_max.
int nullspace_dim(const SparseMatrix& a, double threshold = kZeroThreshold);

/// Supremum over v orthogonal to Null(L_expanded) of (L_neg v, v) / (L_pegp v, v).
/// Dense. Throws Error when the PEGP form is singular there (disconnected PEGP).
double rho_estimate(const ExpandedSystem& sys);

enum class GraphFamily { grid2d, ring };

struct MuRule {
  bool inv_sqrt_n = true;
  double value = 0.0;  ///< used when inv_sqrt_n is false

  double resolve(int n) const;
};

struct ConditionRow {
  std::string family;
  int n = 0;
  int levels = 0;
  int n_tilde = 0;
  double mu = 0.0;
  double kappa = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  std::uint64_t seed = 0;
};

struct ConditionTableOptions {
  GraphFamily family = GraphFamily::grid2d;
  std::vector<int> sizes;          ///< node counts; grids need perfect squares
  MuRule mu;
  std::optional<int> levels;       ///< nullopt: max
  std::uint64_t seed = 0;
  VisitOrder order = VisitOrder::random;
  int ring_degree = 4;
};

/// One dense condition-number row per size for the expanded pencil
/// (L_expanded, L_pegp).
std::vector<ConditionRow> condition_table(const ConditionTableOptions& opts);

}  // namespace lapcond
