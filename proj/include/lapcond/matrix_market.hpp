#pragma once

#include "lapcond/graph.hpp"

#include <istream>
#include <string>

namespace lapcond {

/// Reads a coordinate Matrix Market file as an undirected graph: weights are
/// summed over duplicate entries, made absolute, symmetrized by the larger of
/// |a_ij| and |a_ji|; self-loops are dropped and only the largest connected
/// component is kept. node_labels() holds the 0-based original indices.
WeightedGraph ingest_mtx(const std::string& path);
WeightedGraph ingest_mtx(std::istream& in);

/// Writes each edge once as `coordinate real symmetric`, 1-based.
void write_mtx(const WeightedGraph& g, const std::string& path);
void write_mtx(const WeightedGraph& g, std::ostream& out);

}  // namespace lapcond
