#pragma once

// River Formation Dynamics on a weighted graph. Drops released at source
// vertices flow downhill with probability proportional to the decreasing
// gradient, eroding the vertex they leave and depositing sediment on the
// vertex they reach. The sea (destination) stays at altitude zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfdmrp/geometry.hpp"
#include "rfdmrp/random.hpp"

namespace rfdmrp::rfd {

using Vertex = std::size_t;
using Path = std::vector<Vertex>;

struct Edge {
  Vertex to = 0;
  double length = 0.0;
};

class TerrainGraph {
 public:
  TerrainGraph() = default;
  explicit TerrainGraph(std::vector<Point> positions)
      : positions_(std::move(positions)),
        adjacency_(positions_.size()),
        altitude_(positions_.size(), 0.0) {}

  std::size_t vertex_count() const { return positions_.size(); }
  const Point& position(Vertex v) const { return positions_.at(v); }
  const std::vector<Edge>& neighbors(Vertex v) const { return adjacency_.at(v); }

  /// Undirected edge with Euclidean length.
  void add_edge(Vertex a, Vertex b) { add_edge(a, b, distance(position(a), position(b))); }

  void add_edge(Vertex a, Vertex b, double length) {
    if (a >= vertex_count() || b >= vertex_count())
      throw std::out_of_range("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loops are not allowed");
    if (!(length >= 0.0)) throw std::invalid_argument("edge length must be non-negative");
    adjacency_[a].push_back({b, length});
    adjacency_[b].push_back({a, length});
  }

  std::optional<double> edge_length(Vertex a, Vertex b) const {
    for (const Edge& e : neighbors(a))
      if (e.to == b) return e.length;
    return std::nullopt;
  }

  void set_destination(Vertex d) {
    if (d >= vertex_count()) throw std::out_of_range("destination out of range");
    destination_ = d;
    altitude_[d] = 0.0;
  }
  Vertex destination() const { return destination_; }

  void add_source(Vertex s) {
    if (s >= vertex_count()) throw std::out_of_range("source out of range");
    sources_.push_back(s);
  }
  const std::vector<Vertex>& sources() const { return sources_; }
  void clear_sources() { sources_.clear(); }

  double altitude(Vertex v) const { return altitude_.at(v); }
  const std::vector<double>& altitudes() const { return altitude_; }

  /// Non-negative; writes to the destination are ignored.
  void set_altitude(Vertex v, double value) {
    if (v == destination_) return;
    altitude_.at(v) = std::max(0.0, value);
  }

  /// Initial landscape: each vertex sits at its straight-line distance from
  /// the destination, so every vertex starts with some downhill direction
  /// when the graph is geometric.
  void set_distance_altitudes() {
    for (Vertex v = 0; v < vertex_count(); ++v)
      altitude_[v] = v == destination_ ? 0.0 : distance(position(v), position(destination_));
  }

  /// Every source must reach the destination through the edge set.
  void validate() const {
    if (vertex_count() == 0) throw std::invalid_argument("graph has no vertices");
    std::vector<bool> reached(vertex_count(), false);
    std::vector<Vertex> stack{destination_};
    reached[destination_] = true;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const Edge& e : neighbors(v))
        if (!reached[e.to]) {
          reached[e.to] = true;
          stack.push_back(e.to);
        }
    }
    for (Vertex s : sources_)
      if (!reached[s])
        throw std::invalid_argument("source " + std::to_string(s) +
                                    " is disconnected from the destination");
  }

 private:
  std::vector<Point> positions_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<double> altitude_;
  std::vector<Vertex> sources_;
  Vertex destination_ = 0;
};

struct RfdParams {
  double erosionRate = 0.1;
  double sedimentFraction = 1.0;
  int maxIterations = 1000;
  int convergenceWindow = 10;

  void validate() const {
    if (!(erosionRate > 0.0)) throw std::invalid_argument("erosionRate must be positive");
    if (!(sedimentFraction >= 0.0 && sedimentFraction <= 1.0))
      throw std::invalid_argument("sedimentFraction must lie in [0, 1]");
    if (maxIterations < 1) throw std::invalid_argument("maxIterations must be at least 1");
    if (convergenceWindow < 1) throw std::invalid_argument("convergenceWindow must be at least 1");
  }
};

/// DG(i,j) = (altitude(i) - altitude(j)) / distance(i,j)
inline double decreasing_gradient(const TerrainGraph& g, Vertex i, Vertex j) {
  const auto length = g.edge_length(i, j);
  if (!length) throw std::invalid_argument("no edge between the given vertices");
  if (!(*length > 0.0)) throw std::domain_error("zero-length edge has no gradient");
  return (g.altitude(i) - g.altitude(j)) / *length;
}

/// Downhill neighbors of `i` with their selection probabilities, in
/// adjacency order. Empty when the drop at `i` is stranded.
inline std::vector<std::pair<Vertex, double>> forward_probabilities(const TerrainGraph& g,
                                                                    Vertex i) {
  std::vector<std::pair<Vertex, double>> support;
  double total = 0.0;
  for (const Edge& e : g.neighbors(i)) {
    const double dg = decreasing_gradient(g, i, e.to);
    if (dg > 0.0) {
      support.emplace_back(e.to, dg);
      total += dg;
    }
  }
  for (auto& [v, w] : support) w /= total;
  return support;
}

/// nullopt signals a stranded drop (no downhill neighbor).
inline std::optional<Vertex> select_forward_position(const TerrainGraph& g, Vertex i, Rng& rng) {
  if (i == g.destination()) throw std::invalid_argument("drop is already at the destination");
  const auto support = forward_probabilities(g, i);
  if (support.empty()) return std::nullopt;
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (const auto& [v, p] : support) {
    cumulative += p;
    if (u < cumulative) return v;
  }
  return support.back().first;
}

/// After a move i -> j: altitude(i) drops by erosionRate * DG(i,j) (floored
/// at zero) and altitude(j) gains sedimentFraction of that amount unless j
/// is the destination.
inline void erode_and_deposit(TerrainGraph& g, Vertex i, Vertex j, const RfdParams& p) {
  const double eroded = p.erosionRate * decreasing_gradient(g, i, j);
  g.set_altitude(i, g.altitude(i) - eroded);
  if (j != g.destination()) g.set_altitude(j, g.altitude(j) + p.sedimentFraction * eroded);
}

inline double path_cost(const TerrainGraph& g, const Path& path) {
  double cost = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto length = g.edge_length(path[k - 1], path[k]);
    if (!length) throw std::invalid_argument("path uses a missing edge");
    cost += *length;
  }
  return cost;
}

struct SourceResult {
  Vertex source = 0;
  std::optional<Path> path;  // nullopt: no drop ever reached the destination
  int arrivals = 0;          // drops from this source that reached the sea
};

struct RfdResult {
  std::vector<SourceResult> sources;
  int iterations = 0;
  bool converged = false;
  TerrainGraph finalTerrain;
};

/// Releases one drop per source per iteration and lets it flow to the sea,
/// eroding along the way. Stops when every source's last
/// `convergenceWindow` drops took an identical trail, or after
/// `maxIterations`. Each source reports the trail its drops completed most
/// often; ties go to the lexicographically smallest vertex sequence.
inline RfdResult run_rfd(TerrainGraph g, const RfdParams& p, Rng& rng) {
  p.validate();
  g.validate();
  const Vertex sea = g.destination();
  // A drop that wanders longer than this is treated as lost in a basin.
  const std::size_t stepCap = 4 * g.vertex_count() + 4;

  const std::size_t sourceCount = g.sources().size();
  std::vector<std::map<Path, int>> tally(sourceCount);
  std::vector<Path> lastTrail(sourceCount);
  std::vector<int> streak(sourceCount, 0);

  RfdResult result;
  for (int iteration = 1; iteration <= p.maxIterations; ++iteration) {
    result.iterations = iteration;
    for (std::size_t s = 0; s < sourceCount; ++s) {
      const Vertex origin = g.sources()[s];
      Path trail{origin};
      Vertex current = origin;
      bool arrived = current == sea;
      while (!arrived && trail.size() <= stepCap) {
        const auto next = select_forward_position(g, current, rng);
        if (!next) break;
        erode_and_deposit(g, current, *next, p);
        current = *next;
        trail.push_back(current);
        arrived = current == sea;
      }
      if (!arrived) {
        streak[s] = 0;
        lastTrail[s].clear();
        continue;
      }
      ++tally[s][trail];
      streak[s] = trail == lastTrail[s] ? streak[s] + 1 : 1;
      lastTrail[s] = std::move(trail);
    }
    const bool allConverged = std::all_of(streak.begin(), streak.end(),
                                          [&](int k) { return k >= p.convergenceWindow; });
    if (sourceCount > 0 && allConverged) {
      result.converged = true;
      break;
    }
  }

  for (std::size_t s = 0; s < sourceCount; ++s) {
    SourceResult sr{g.sources()[s], std::nullopt, 0};
    int best = 0;
    // std::map iterates in lexicographic order, so strict > keeps the
    // smallest sequence among equally frequent trails.
    for (const auto& [trail, count] : tally[s]) {
      sr.arrivals += count;
      if (count > best) {
        best = count;
        sr.path = trail;
      }
    }
    result.sources.push_back(std::move(sr));
  }
  result.finalTerrain = std::move(g);
  return result;
}

}  // namespace rfdmrp::rfd
