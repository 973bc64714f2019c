#pragma once

// Deployment, ring partitioning around the sink, hop counts, neighbor
// tables and the control packets that populate them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "rfdmrp/geometry.hpp"
#include "rfdmrp/radio.hpp"
#include "rfdmrp/random.hpp"
#include "rfdmrp/sim_config.hpp"

namespace rfdmrp {

using NodeId = std::size_t;

/// Sentinel address of the base station in packets and forward choices.
inline constexpr NodeId kBaseStation = std::numeric_limits<NodeId>::max();

struct Node {
  NodeId id = 0;
  Point position;
  int hopCount = 0;
  int region = 0;
  bool alive = true;
};

/// Nodes are addressed by their index in `nodes`; `Node::id` keeps the
/// external label (e.g. from a node-list file).
struct Field {
  double width = 0.0;
  double height = 0.0;
  Point bsPosition;
  std::vector<Node> nodes;

  double distance_to_bs(NodeId i) const {
    return distance(nodes.at(i).position, bsPosition);
  }
  double distance_between(NodeId i, NodeId j) const {
    return distance(nodes.at(i).position, nodes.at(j).position);
  }
  std::size_t alive_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.alive; }));
  }
};

inline Field deploy_nodes(const SimConfig& config, Rng& rng) {
  if (config.nodeCount < 1) throw std::invalid_argument("nodeCount must be at least 1");
  Field field{config.fieldWidth, config.fieldHeight, config.bsPosition, {}};
  field.nodes.reserve(config.nodeCount);
  for (std::size_t i = 0; i < config.nodeCount; ++i) {
    const double x = uniform(rng, 0.0, config.fieldWidth);
    const double y = uniform(rng, 0.0, config.fieldHeight);
    field.nodes.push_back(Node{i, {x, y}, 0, 0, true});
  }
  return field;
}

/// Reads a node list: one `id, x, y` record per line. Blank lines and
/// lines starting with '#' are skipped.
inline Field load_node_list(std::istream& in, const SimConfig& config) {
  Field field{config.fieldWidth, config.fieldHeight, config.bsPosition, {}};
  std::unordered_set<std::size_t> seen;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    long long id = -1;
    double x = 0.0, y = 0.0;
    std::string extra;
    if (!(fields >> id >> x >> y) || (fields >> extra) || id < 0)
      throw std::runtime_error("node list line " + std::to_string(lineNo) +
                               ": expected `id, x, y`");
    if (x < 0.0 || x > config.fieldWidth || y < 0.0 || y > config.fieldHeight)
      throw std::runtime_error("node list line " + std::to_string(lineNo) +
                               ": position outside the field");
    if (!seen.insert(static_cast<std::size_t>(id)).second)
      throw std::runtime_error("node list line " + std::to_string(lineNo) +
                               ": duplicate id " + std::to_string(id));
    field.nodes.push_back(Node{static_cast<NodeId>(id), {x, y}, 0, 0, true});
  }
  if (field.nodes.empty()) throw std::runtime_error("node list is empty");
  return field;
}

/// Rings of width tr/2 around the sink.
inline int hop_count_for_distance(double distanceToBs, double tr) {
  return static_cast<int>(std::floor(distanceToBs / (tr / 2.0)));
}

/// ceil(max_dist / (tr/2)); partial outer rings still count as a region.
inline int region_count(const Field& field, double tr) {
  if (!(tr > 0.0)) throw std::invalid_argument("transmission range must be positive");
  double maxDist = 0.0;
  for (NodeId i = 0; i < field.nodes.size(); ++i)
    maxDist = std::max(maxDist, field.distance_to_bs(i));
  return static_cast<int>(std::ceil(maxDist / (tr / 2.0)));
}

inline void assign_hop_counts(Field& field, double tr) {
  for (NodeId i = 0; i < field.nodes.size(); ++i) {
    Node& node = field.nodes[i];
    node.hopCount = hop_count_for_distance(field.distance_to_bs(i), tr);
    node.region = node.hopCount;
  }
}

// ---------------------------------------------------------------------------
// Control packets

enum class ControlKind { Request, Reply, EnergyLevel, Beacon };

struct RequestPayload {};

struct ReplyPayload {
  int hcBs = 0;
  double reNN = 0.0;
  Point position;
};

struct EnergyLevelPayload {
  double reNN = 0.0;
};

// Sink -> node carries nothing; node -> sink carries the node position;
// the sink's answer carries the hop count.
struct BeaconPayload {
  std::optional<Point> position;
  std::optional<int> hopCount;
};

struct ControlPacket {
  NodeId srcId = 0;
  NodeId destId = 0;
  std::variant<RequestPayload, ReplyPayload, EnergyLevelPayload, BeaconPayload> payload;

  ControlKind kind() const { return static_cast<ControlKind>(payload.index()); }
};

/// Observer for control traffic; receives each unicast packet with the
/// distance it travelled. The simulator uses it to optionally charge energy.
using ControlSink = std::function<void(const ControlPacket&, double distance)>;

/// Sink-driven hop-count discovery: beacon, position report, hop-count reply.
inline void beacon_exchange(Field& field, double tr, const ControlSink& sink) {
  for (NodeId i = 0; i < field.nodes.size(); ++i) {
    const double d = field.distance_to_bs(i);
    const int hc = hop_count_for_distance(d, tr);
    if (sink) {
      sink(ControlPacket{kBaseStation, i, BeaconPayload{}}, d);
      sink(ControlPacket{i, kBaseStation, BeaconPayload{field.nodes[i].position, std::nullopt}}, d);
      sink(ControlPacket{kBaseStation, i, BeaconPayload{std::nullopt, hc}}, d);
    }
    field.nodes[i].hopCount = hc;
    field.nodes[i].region = hc;
  }
}

// ---------------------------------------------------------------------------
// Neighbor tables

struct NNTableEntry {
  NodeId nextNode = 0;
  int hcBs = 0;
  double reNN = 0.0;
  double distance = 0.0;  // this node -> neighbor
  double dBs = 0.0;       // neighbor -> sink
};

struct NeighborTables {
  std::vector<std::vector<NNTableEntry>> entries;

  const std::vector<NNTableEntry>& of(NodeId i) const { return entries.at(i); }
  bool isolated(NodeId i) const { return entries.at(i).empty(); }
  std::size_t size() const { return entries.size(); }
};

/// REQUEST/REPLY exchange between every pair within range. Entries are
/// ordered by neighbor index.
inline NeighborTables build_nn_tables(const Field& field, const EnergyLedger& ledger, double tr,
                                      const ControlSink& sink = {}) {
  const std::size_t n = field.nodes.size();
  NeighborTables tables;
  tables.entries.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = field.distance_between(i, j);
      if (d > tr) continue;
      const ControlPacket request{i, j, RequestPayload{}};
      const ControlPacket reply{j, i,
                                ReplyPayload{field.nodes[j].hopCount, ledger.residual(j),
                                             field.nodes[j].position}};
      if (sink) {
        sink(request, d);
        sink(reply, d);
      }
      const auto& r = std::get<ReplyPayload>(reply.payload);
      tables.entries[i].push_back(NNTableEntry{j, r.hcBs, r.reNN, distance(field.nodes[i].position, r.position),
                                               distance(r.position, field.bsPosition)});
    }
  }
  return tables;
}

/// ENERGY_LEVEL exchange: each entry takes the neighbor's current RE;
/// entries for neighbors below `tE` are dropped.
inline void refresh_energy_entries(const EnergyLedger& ledger, double tE, NeighborTables& tables,
                                   const ControlSink& sink = {}) {
  for (NodeId i = 0; i < tables.entries.size(); ++i) {
    auto& table = tables.entries[i];
    const bool listenerAlive = ledger.residual(i) >= tE;
    std::erase_if(table, [&](NNTableEntry& e) {
      const double re = ledger.residual(e.nextNode);
      if (re < tE) return true;
      if (sink && listenerAlive)
        sink(ControlPacket{e.nextNode, i, EnergyLevelPayload{re}}, e.distance);
      e.reNN = re;
      return false;
    });
  }
}

}  // namespace rfdmrp
