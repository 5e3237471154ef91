#pragma once

#include "lapcond/graph.hpp"
#include "lapcond/sparse_matrix.hpp"

namespace lapcond {

/// L = D - A. Off-diagonal (i,j) = -w(i,j); the diagonal is the sum of the
/// incident weights, so rows sum to zero up to accumulation order. Works for
/// signed weights.
SparseMatrix build_laplacian(const WeightedGraph& g);

struct Incidence {
  SparseMatrix B;  ///< m x n, row e = (u,v) with +1 at u and -1 at v, u < v
  SparseMatrix W;  ///< m x m diagonal of edge weights
};

Incidence build_incidence(const WeightedGraph& g);

/// Diagonal matrix of square-rooted weights, W = W_half^T W_half.
/// Throws Error when the graph has non-positive weights.
SparseMatrix sqrt_weights(const WeightedGraph& g);

/// Inverse of build_laplacian: reads the off-diagonal pattern of a symmetric
/// matrix as graph edges with weight -L(i,j). Entries with |value| <= tol are
/// ignored.
WeightedGraph graph_from_laplacian(const SparseMatrix& laplacian, double tol = 0.0);

/// Sum over edges of w (v_i - v_j)^2.
double quadratic_form(const WeightedGraph& g, std::span<const double> v);

}  // namespace lapcond
