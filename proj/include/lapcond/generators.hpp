#pragma once

#include "lapcond/graph.hpp"

#include <cstdint>

namespace lapcond {

/// side x side 4-neighbor lattice with unit weights, row-major numbering.
WeightedGraph gen_grid2d(int side);

/// Circulant graph: each node joined to its deg/2 nearest neighbors on each side.
WeightedGraph gen_ring(int n, int deg);

/// Ring lattice with each edge rewired with probability beta to a random
/// non-neighbor. Disconnected draws are retried with seed+1, up to 100 times.
WeightedGraph gen_watts_strogatz(int n, int deg, double beta, std::uint64_t seed);

}  // namespace lapcond
