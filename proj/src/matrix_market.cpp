#include "lapcond/matrix_market.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace lapcond {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

WeightedGraph ingest_mtx(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ingest_mtx: cannot open " + path);
  return ingest_mtx(in);
}

WeightedGraph ingest_mtx(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("ingest_mtx: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw Error("ingest_mtx: malformed header: " + line);
  if (lower(format) != "coordinate") throw Error("ingest_mtx: only coordinate format is supported");
  field = lower(field);
  symmetry = lower(symmetry);
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer")
    throw Error("ingest_mtx: unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw Error("ingest_mtx: unsupported symmetry '" + symmetry + "'");

  long long rows = -1, cols = -1, entries = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size(line);
    if (!(size >> rows >> cols >> entries)) throw Error("ingest_mtx: malformed size line: " + line);
    break;
  }
  if (rows < 0) throw Error("ingest_mtx: missing size line");
  if (rows != cols) throw Error("ingest_mtx: matrix is not square");
  if (rows > std::numeric_limits<int>::max()) throw Error("ingest_mtx: too many rows");
  const int n = static_cast<int>(rows);

  // Entries are summed per ordered pair, then the two directions are
  // combined by the larger magnitude.
  std::map<std::pair<int, int>, double> directed;
  long long read = 0;
  while (read < entries && std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream es(line);
    long long i, j;
    double w = 1.0;
    if (!(es >> i >> j)) throw Error("ingest_mtx: malformed entry: " + line);
    if (!pattern && !(es >> w)) throw Error("ingest_mtx: entry without value: " + line);
    if (i < 1 || j < 1 || i > rows || j > cols) throw Error("ingest_mtx: index out of range: " + line);
    ++read;
    if (i == j) continue;
    directed[{static_cast<int>(i - 1), static_cast<int>(j - 1)}] += w;
    if (symmetry == "symmetric") directed[{static_cast<int>(j - 1), static_cast<int>(i - 1)}] += w;
  }
  if (read < entries) throw Error("ingest_mtx: expected " + std::to_string(entries) + " entries");

  std::vector<Edge> edges;
  for (const auto& [key, w] : directed) {
    auto [u, v] = key;
    if (u > v) {
      if (directed.count({v, u})) continue;  // handled from the (v, u) side
      std::swap(u, v);
    }
    double mag = std::abs(w);
    if (auto it = directed.find({v, u}); it != directed.end()) mag = std::max(mag, std::abs(it->second));
    if (mag > 0.0) edges.push_back({u, v, mag});
  }
  const WeightedGraph full(n, std::move(edges));
  auto comps = connected_components(full);
  if (comps.empty()) throw Error("ingest_mtx: graph has no nodes");
  std::size_t best = 0;
  for (std::size_t c = 1; c < comps.size(); ++c)
    if (comps[c].size() > comps[best].size()) best = c;
  if (comps[best].size() < 2) throw Error("ingest_mtx: largest component has no edges");
  return induced_subgraph(full, comps[best]);
}

void write_mtx(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_mtx: cannot open " + path + " for writing");
  write_mtx(g, out);
  if (!out) throw Error("write_mtx: write to " + path + " failed");
}

void write_mtx(const WeightedGraph& g, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << g.num_nodes() << ' ' << g.num_nodes() << ' ' << g.num_edges() << '\n';
  out << std::setprecision(17);
  // Lower-triangle storage as the format expects for symmetric matrices.
  for (const auto& e : g.edges()) out << e.v + 1 << ' ' << e.u + 1 << ' ' << e.w << '\n';
}

}  // namespace lapcond
