#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "rfdmrp/rfd.hpp"

namespace rfdmrp::rfd {

struct ShortestPath {
  Path path;
  double cost = 0.0;
};

// Dijkstra from `source` to `target` over edge lengths. Used as the exact
// reference for river-formation results; it never looks at altitudes.
inline std::optional<ShortestPath> dijkstra(const TerrainGraph& g, Vertex source, Vertex target) {
  const std::size_t n = g.vertex_count();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<Vertex> prev(n, n);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  dist[source] = 0.0;
  frontier.push({0.0, source});
  while (!frontier.empty()) {
    const auto [d, v] = frontier.top();
    frontier.pop();
    if (d > dist[v]) continue;
    if (v == target) break;
    for (const Edge& e : g.neighbors(v)) {
      const double nd = d + e.length;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        prev[e.to] = v;
        frontier.push({nd, e.to});
      }
    }
  }
  if (dist[target] == inf) return std::nullopt;
  ShortestPath result{{}, dist[target]};
  for (Vertex v = target; v != n; v = prev[v]) {
    result.path.push_back(v);
    if (v == source) break;
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

}  // namespace rfdmrp::rfd
