#include "cokern/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "cokern/types.hpp"

namespace cokern {

CouplingGraph::CouplingGraph(int n, std::vector<Edge> edges) : n_(n), adjacency_(static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 1) throw ValidationError("graph needs at least one vertex");
  std::set<Edge> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw ValidationError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range for n=" + std::to_string(n));
    }
    if (a == b) throw ValidationError("self-loop at vertex " + std::to_string(a));
    const Edge e{std::min(a, b), std::max(a, b)};
    if (!seen.insert(e).second) {
      throw ValidationError("duplicate edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ")");
    }
    edges_.push_back(e);
    adjacency_[static_cast<std::size_t>(e.first)].push_back(e.second);
    adjacency_[static_cast<std::size_t>(e.second)].push_back(e.first);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

CouplingGraph CouplingGraph::path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return {n, std::move(e)};
}

CouplingGraph CouplingGraph::ring(int n) {
  if (n < 3) return path(n);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return {n, std::move(e)};
}

CouplingGraph CouplingGraph::edgeless(int n) { return {n, {}}; }

CouplingGraph CouplingGraph::heavy_hex(int n) {
  if (n < 1) throw ValidationError("graph needs at least one vertex");
  // Honeycomb as a brick wall: row-neighbours always linked, column
  // neighbours linked when (row + col) is even. Each edge then gets a
  // midpoint vertex.
  const int side = std::max(3, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 1);
  auto id = [side](int r, int c) { return r * side + c; };
  std::vector<Edge> honeycomb;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) honeycomb.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < side && (r + c) % 2 == 0) honeycomb.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  int next = side * side;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(side * side) + honeycomb.size());
  for (auto [a, b] : honeycomb) {
    const int mid = next++;
    adj[static_cast<std::size_t>(a)].push_back(mid);
    adj[static_cast<std::size_t>(mid)].push_back(a);
    adj[static_cast<std::size_t>(b)].push_back(mid);
    adj[static_cast<std::size_t>(mid)].push_back(b);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  std::map<int, int> order;
  std::queue<int> frontier;
  frontier.push(0);
  order[0] = 0;
  while (!frontier.empty() && static_cast<int>(order.size()) < n) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (order.count(w) || static_cast<int>(order.size()) >= n) continue;
      const int label = static_cast<int>(order.size());
      order[w] = label;
      frontier.push(w);
    }
  }
  std::vector<Edge> edges;
  for (auto [v, lv] : order) {
    for (int w : adj[static_cast<std::size_t>(v)]) {
      auto it = order.find(w);
      if (it != order.end() && v < w) edges.emplace_back(std::min(lv, it->second), std::max(lv, it->second));
    }
  }
  std::sort(edges.begin(), edges.end());
  return {n, std::move(edges)};
}

CouplingGraph CouplingGraph::builtin(const std::string& name, int n) {
  if (name == "path") return path(n);
  if (name == "ring") return ring(n);
  if (name == "heavy-hex") return heavy_hex(n);
  if (name == "edgeless") return edgeless(n);
  throw ValidationError("unknown built-in graph '" + name + "' (expected path, ring, heavy-hex, edgeless)");
}

}  // namespace cokern
