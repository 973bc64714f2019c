#pragma once

// Multi-hop data collection driven by hop-count and residual-energy
// gradients: forward-node selection, aggregation and the per-round relay.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rfdmrp/radio.hpp"
#include "rfdmrp/random.hpp"
#include "rfdmrp/topology.hpp"

namespace rfdmrp {

/// H(i,j) = (HC(i) - HC(j)) / distance(i,j) * RE(j)
inline double gradient_h(int hcI, int hcJ, double distanceIJ, double reJ) {
  if (!(distanceIJ > 0.0))
    throw std::invalid_argument("gradient between coincident nodes is undefined");
  return static_cast<double>(hcI - hcJ) / distanceIJ * reJ;
}

inline double gradient_h(int hcI, const NNTableEntry& neighbor) {
  return gradient_h(hcI, neighbor.hcBs, neighbor.distance, neighbor.reNN);
}

struct ForwardChoice {
  NodeId source = 0;
  NodeId chosen = kBaseStation;
  // Support of the draw in table order; empty for direct transmission.
  std::vector<std::pair<NodeId, double>> probabilities;

  bool to_base_station() const { return chosen == kBaseStation; }
};

/// Support and normalised probabilities over the neighbors of a node at
/// hop count `hcI`: entries with reNN >= tE and H > 0.
inline std::vector<std::pair<NodeId, double>> forward_probabilities(
    int hcI, std::span<const NNTableEntry> table, double tE) {
  std::vector<std::pair<NodeId, double>> support;
  if (hcI == 0) return support;
  double total = 0.0;
  for (const auto& entry : table) {
    if (entry.reNN < tE) continue;
    const double h = gradient_h(hcI, entry);
    if (h > 0.0) {
      support.emplace_back(entry.nextNode, h);
      total += h;
    }
  }
  for (auto& [id, weight] : support) weight /= total;
  return support;
}

/// Samples the next hop; falls back to the sink when the node sits in the
/// innermost ring or no neighbor qualifies. Draws from `rng` only when the
/// support is non-empty.
inline ForwardChoice select_forward_node(NodeId i, int hcI, std::span<const NNTableEntry> table,
                                         double tE, Rng& rng) {
  ForwardChoice choice{i, kBaseStation, forward_probabilities(hcI, table, tE)};
  if (choice.probabilities.empty()) return choice;
  const double u = uniform01(rng);
  double cumulative = 0.0;
  choice.chosen = choice.probabilities.back().first;
  for (const auto& [id, p] : choice.probabilities) {
    cumulative += p;
    if (u < cumulative) {
      choice.chosen = id;
      break;
    }
  }
  return choice;
}

struct AggregationPolicy {
  double gamma = 0.0;

  void validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw std::invalid_argument("aggregation factor must lie in [0, 1]");
  }
};

struct DataPacket {
  std::vector<NodeId> originIds;  // sorted, unique
  Bits bits = 0;
  NodeId holder = 0;
  int relays = 0;  // holders visited after the origin
};

struct AggregateResult {
  DataPacket packet;
  Bits inputBits = 0;
  std::size_t inputCount = 0;
};

/// Fuses the received packets with the node's own reading. Output size is
/// b + gamma * (inputBits - b): one packet at gamma = 0, every input bit
/// relayed untouched at gamma = 1. For k single-packet inputs this is
/// b * (1 + gamma * (k - 1)).
inline AggregateResult aggregate(const AggregationPolicy& policy,
                                 std::span<const DataPacket> received, Bits ownBits,
                                 Bits packetBits, NodeId holder) {
  policy.validate();
  AggregateResult result;
  result.inputCount = received.size() + (ownBits > 0 ? 1 : 0);
  if (result.inputCount == 0) throw std::invalid_argument("aggregate needs at least one input");

  DataPacket& out = result.packet;
  out.holder = holder;
  if (ownBits > 0) out.originIds.push_back(holder);
  result.inputBits = ownBits;
  for (const auto& packet : received) {
    result.inputBits += packet.bits;
    out.originIds.insert(out.originIds.end(), packet.originIds.begin(), packet.originIds.end());
    out.relays = std::max(out.relays, packet.relays);
  }
  std::sort(out.originIds.begin(), out.originIds.end());
  out.originIds.erase(std::unique(out.originIds.begin(), out.originIds.end()), out.originIds.end());

  if (result.inputCount == 1) {
    out.bits = result.inputBits;
  } else {
    const double b = static_cast<double>(packetBits);
    const double in = static_cast<double>(result.inputBits);
    out.bits = static_cast<Bits>(std::llround(b + policy.gamma * (in - b)));
  }
  return result;
}

struct RoutingParams {
  RadioParams radio;
  Bits packetBits = 4096 * 8;
  double energyThreshold = 0.1;
  AggregationPolicy aggregation;
};

/// One transmission within a round.
struct HopRecord {
  NodeId from = 0;
  NodeId to = kBaseStation;
  int fromHopCount = 0;
  int toHopCount = -1;  // -1 for the sink
  double selectedReNN = 0.0;
  Bits bits = 0;
};

struct RoundOutcome {
  std::size_t packetsToBs = 0;
  Bits bitsToBs = 0;
  std::size_t directHop0 = 0;      // innermost-ring nodes sending to the sink
  std::size_t directFallback = 0;  // outer nodes with no usable neighbor
  std::size_t droppedPackets = 0;
  int maxRelayPath = 0;
  std::vector<HopRecord> hops;
};

inline void update_liveness(Field& field, const EnergyLedger& ledger, double tE) {
  for (NodeId i = 0; i < field.nodes.size(); ++i)
    field.nodes[i].alive = ledger.residual(i) >= tE;
}

/// One data-collection round. Rings are swept outermost first so every
/// node holds all its inbound packets before it aggregates and forwards.
/// Liveness is re-evaluated at the start of each ring sweep; a node that
/// has fallen below the threshold drops whatever it holds. Neighbor tables
/// are refreshed once the sweep reaches the sink.
///
/// Returns nullopt when no node is alive.
inline std::optional<RoundOutcome> relay_round(Field& field, NeighborTables& tables,
                                               EnergyLedger& ledger, const RoutingParams& params,
                                               Rng& rng, const ControlSink& control = {}) {
  const double tE = params.energyThreshold;
  update_liveness(field, ledger, tE);
  if (field.alive_count() == 0) return std::nullopt;

  const std::size_t n = field.nodes.size();
  const Bits b = params.packetBits;
  int maxHc = 0;
  for (const auto& node : field.nodes) maxHc = std::max(maxHc, node.hopCount);

  std::vector<std::vector<NodeId>> rings(static_cast<std::size_t>(maxHc) + 1);
  for (NodeId i = 0; i < n; ++i)
    if (field.nodes[i].alive) rings[static_cast<std::size_t>(field.nodes[i].hopCount)].push_back(i);

  std::vector<std::vector<DataPacket>> inbox(n);
  RoundOutcome outcome;

  for (int hc = maxHc; hc >= 0; --hc) {
    update_liveness(field, ledger, tE);
    for (NodeId i : rings[static_cast<std::size_t>(hc)]) {
      if (!field.nodes[i].alive) {
        outcome.droppedPackets += inbox[i].size();
        inbox[i].clear();
        continue;
      }
      AggregateResult fused = aggregate(params.aggregation, inbox[i], b, b, i);
      inbox[i].clear();
      const double fusion =
          fused.inputCount > 1 ? fusion_energy(params.radio, fused.inputBits) : 0.0;
      DataPacket& packet = fused.packet;

      const ForwardChoice choice = select_forward_node(i, hc, tables.of(i), tE, rng);
      HopRecord hop{i, choice.chosen, hc, -1, 0.0, packet.bits};

      if (choice.to_base_station()) {
        const double d = field.distance_to_bs(i);
        ledger.charge(i, tx_energy(params.radio, packet.bits, d), 0.0, fusion);
        ++outcome.packetsToBs;
        outcome.bitsToBs += packet.bits;
        outcome.maxRelayPath = std::max(outcome.maxRelayPath, packet.relays);
        if (hc == 0)
          ++outcome.directHop0;
        else
          ++outcome.directFallback;
      } else {
        const NodeId j = choice.chosen;
        const auto& table = tables.of(i);
        const auto entry = std::find_if(table.begin(), table.end(),
                                        [j](const NNTableEntry& e) { return e.nextNode == j; });
        hop.toHopCount = entry->hcBs;
        hop.selectedReNN = entry->reNN;
        ledger.charge(i, tx_energy(params.radio, packet.bits, entry->distance), 0.0, fusion);
        if (field.nodes[j].alive) {
          ledger.charge(j, 0.0, rx_energy(params.radio, packet.bits), 0.0);
          packet.holder = j;
          packet.relays += 1;
          inbox[j].push_back(std::move(packet));
        } else {
          ++outcome.droppedPackets;
        }
      }
      outcome.hops.push_back(hop);
    }
  }

  update_liveness(field, ledger, tE);
  refresh_energy_entries(ledger, tE, tables, control);
  return outcome;
}

}  // namespace rfdmrp
