#pragma once

// Text description of a terrain graph for the river-formation demo:
//
//   # comment
//   vertex <id> <x> <y>
//   edge <id> <id> [length]     (Euclidean length when omitted)
//   source <id>
//   destination <id>
//
// Vertex ids are arbitrary non-negative integers; each must be declared
// before it is referenced.

#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfdmrp/rfd.hpp"

namespace rfdmrp::rfd {

class GraphSpecError : public std::runtime_error {
 public:
  GraphSpecError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct GraphSpec {
  TerrainGraph graph;
  std::vector<long long> labels;  // declared id of each vertex index
};

inline GraphSpec parse_graph_spec(std::istream& in) {
  struct PendingEdge {
    Vertex a, b;
    std::optional<double> length;
    int line;
  };
  std::vector<Point> positions;
  std::vector<long long> labels;
  std::map<long long, Vertex> index;
  std::vector<PendingEdge> edges;
  std::vector<Vertex> sources;
  std::optional<Vertex> destination;

  auto lookup = [&](long long id, int lineNo) {
    const auto it = index.find(id);
    if (it == index.end()) throw GraphSpecError(lineNo, "unknown vertex " + std::to_string(id));
    return it->second;
  };

  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string keyword;
    if (!(words >> keyword)) continue;
    std::string extra;
    if (keyword == "vertex") {
      long long id = -1;
      double x = 0.0, y = 0.0;
      if (!(words >> id >> x >> y) || (words >> extra) || id < 0)
        throw GraphSpecError(lineNo, "expected `vertex <id> <x> <y>`");
      if (!index.emplace(id, positions.size()).second)
        throw GraphSpecError(lineNo, "duplicate vertex " + std::to_string(id));
      positions.push_back({x, y});
      labels.push_back(id);
    } else if (keyword == "edge") {
      long long a = -1, b = -1;
      if (!(words >> a >> b)) throw GraphSpecError(lineNo, "expected `edge <id> <id> [length]`");
      PendingEdge e{lookup(a, lineNo), lookup(b, lineNo), std::nullopt, lineNo};
      double length = 0.0;
      if (words >> length) {
        if (length < 0.0) throw GraphSpecError(lineNo, "edge length must be non-negative");
        e.length = length;
      } else if (!words.eof()) {
        throw GraphSpecError(lineNo, "malformed edge length");
      }
      words.clear();
      if (words >> extra) throw GraphSpecError(lineNo, "trailing text after edge");
      if (e.a == e.b) throw GraphSpecError(lineNo, "self-loop edge");
      edges.push_back(e);
    } else if (keyword == "source" || keyword == "destination") {
      long long id = -1;
      if (!(words >> id) || (words >> extra))
        throw GraphSpecError(lineNo, "expected `" + keyword + " <id>`");
      const Vertex v = lookup(id, lineNo);
      if (keyword == "source") {
        sources.push_back(v);
      } else {
        if (destination) throw GraphSpecError(lineNo, "destination declared twice");
        destination = v;
      }
    } else {
      throw GraphSpecError(lineNo, "unknown keyword '" + keyword + "'");
    }
  }
  if (positions.empty()) throw GraphSpecError(lineNo, "no vertices declared");
  if (!destination) throw GraphSpecError(lineNo, "no destination declared");
  if (sources.empty()) throw GraphSpecError(lineNo, "no source declared");

  GraphSpec spec{TerrainGraph(std::move(positions)), std::move(labels)};
  for (const auto& e : edges) {
    if (e.length)
      spec.graph.add_edge(e.a, e.b, *e.length);
    else
      spec.graph.add_edge(e.a, e.b);
  }
  spec.graph.set_destination(*destination);
  for (Vertex s : sources) spec.graph.add_source(s);
  spec.graph.set_distance_altitudes();
  return spec;
}

}  // namespace rfdmrp::rfd
