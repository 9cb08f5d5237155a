#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cokern {

/// Simple undirected graph on vertices [0, n). Edges are stored with first < second.
class CouplingGraph {
 public:
  using Edge = std::pair<int, int>;

  CouplingGraph() = default;
  /// Throws ValidationError on self-loops, duplicates, or out-of-range vertices.
  CouplingGraph(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_.at(static_cast<std::size_t>(v)); }

  static CouplingGraph path(int n);
  static CouplingGraph ring(int n);
  static CouplingGraph edgeless(int n);
  /// First n vertices (breadth-first from a corner) of a heavy-hex lattice:
  /// a honeycomb with an extra vertex on every edge. Always connected.
  static CouplingGraph heavy_hex(int n);
  /// Built-in by name: "path", "ring", "heavy-hex", "edgeless".
  static CouplingGraph builtin(const std::string& name, int n);

  friend bool operator==(const CouplingGraph&, const CouplingGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace cokern
