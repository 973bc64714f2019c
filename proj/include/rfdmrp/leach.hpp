#pragma once

// LEACH and MODLEACH comparison baselines on the same radio and topology
// substrate as the multi-hop protocol.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rfdmrp/radio.hpp"
#include "rfdmrp/random.hpp"
#include "rfdmrp/routing.hpp"
#include "rfdmrp/sim_config.hpp"
#include "rfdmrp/topology.hpp"

namespace rfdmrp::leach {

inline constexpr int kNeverHead = std::numeric_limits<int>::min();
inline constexpr NodeId kUnassigned = kBaseStation - 1;

struct ClusterState {
  int round = 0;
  std::vector<NodeId> clusterHeads;
  // Head of each node: the node itself for heads, kBaseStation for direct
  // transmission, kUnassigned for dead nodes.
  std::vector<NodeId> membership;
  std::vector<int> lastHeadRound;
  std::vector<double> energyAtElection;

  static ClusterState initial(std::size_t nodeCount) {
    ClusterState s;
    s.membership.assign(nodeCount, kUnassigned);
    s.lastHeadRound.assign(nodeCount, kNeverHead);
    s.energyAtElection.assign(nodeCount, 0.0);
    return s;
  }

  bool is_head(NodeId i) const { return membership.at(i) == i; }
};

inline int epoch_length(double p) { return static_cast<int>(std::ceil(1.0 / p - 1e-9)); }

inline bool eligible_for_head(const ClusterState& state, NodeId i, int round, double p) {
  const int last = state.lastHeadRound.at(i);
  return last == kNeverHead || round - last >= epoch_length(p);
}

/// T(n) = p / (1 - p * (r mod ceil(1/p))) for eligible nodes, 0 otherwise.
inline double election_threshold(double p, int round, bool eligible) {
  if (!eligible) return 0.0;
  const int epoch = epoch_length(p);
  return p / (1.0 - p * static_cast<double>(round % epoch));
}

/// Every alive node joins the closest head; with no heads everyone sends
/// straight to the sink.
inline void assign_members(ClusterState& state, const Field& field) {
  const std::size_t n = field.nodes.size();
  state.membership.assign(n, kUnassigned);
  for (NodeId h : state.clusterHeads) state.membership[h] = h;
  for (NodeId i = 0; i < n; ++i) {
    if (!field.nodes[i].alive || state.membership[i] == i) continue;
    NodeId best = kBaseStation;
    double bestDistance = std::numeric_limits<double>::infinity();
    for (NodeId h : state.clusterHeads) {
      const double d = field.distance_between(i, h);
      if (d < bestDistance) {
        bestDistance = d;
        best = h;
      }
    }
    state.membership[i] = best;
  }
}

/// Distributed self-election. One uniform draw per alive node, in index
/// order, whether or not the node is eligible. A lone survivor is always
/// its own head.
inline ClusterState leach_elect_heads(const Field& field, const EnergyLedger& ledger,
                                      const LeachParams& params, int round, Rng& rng,
                                      ClusterState history) {
  const std::size_t n = field.nodes.size();
  if (history.lastHeadRound.size() != n) history = ClusterState::initial(n);
  history.round = round;
  history.clusterHeads.clear();

  const std::size_t alive = field.alive_count();
  for (NodeId i = 0; i < n; ++i) {
    if (!field.nodes[i].alive) continue;
    const double u = uniform01(rng);
    const bool elected =
        alive == 1 ||
        u < election_threshold(params.pDesired, round,
                               eligible_for_head(history, i, round, params.pDesired));
    if (elected) {
      history.clusterHeads.push_back(i);
      history.lastHeadRound[i] = round;
      history.energyAtElection[i] = ledger.residual(i);
    }
  }
  assign_members(history, field);
  return history;
}

/// Members report to their head (amplifier scaled by `intraAmplifierScale`),
/// heads fuse and report to the sink at full power. A head stops accepting
/// packets once it falls below the threshold and then forwards nothing.
inline RoundOutcome leach_round(Field& field, const ClusterState& state, EnergyLedger& ledger,
                                const RoutingParams& params, double intraAmplifierScale = 1.0) {
  const double tE = params.energyThreshold;
  const Bits b = params.packetBits;
  const RadioParams intra = params.radio.with_amplifier_scale(intraAmplifierScale);
  const std::size_t n = field.nodes.size();
  RoundOutcome outcome;
  std::vector<std::vector<DataPacket>> inbox(n);

  for (NodeId i = 0; i < n; ++i) {
    if (!field.nodes[i].alive || state.is_head(i)) continue;
    const NodeId head = state.membership[i];
    if (head == kUnassigned) continue;
    if (head == kBaseStation) {
      ledger.charge(i, tx_energy(params.radio, b, field.distance_to_bs(i)), 0.0, 0.0);
      ++outcome.packetsToBs;
      outcome.bitsToBs += b;
      ++outcome.directFallback;
      outcome.hops.push_back(HopRecord{i, kBaseStation, field.nodes[i].hopCount, -1, 0.0, b});
      continue;
    }
    ledger.charge(i, tx_energy(intra, b, field.distance_between(i, head)), 0.0, 0.0);
    outcome.hops.push_back(
        HopRecord{i, head, field.nodes[i].hopCount, field.nodes[head].hopCount, 0.0, b});
    if (ledger.residual(head) >= tE) {
      ledger.charge(head, 0.0, rx_energy(params.radio, b), 0.0);
      inbox[head].push_back(DataPacket{{i}, b, head, 1});
    } else {
      ++outcome.droppedPackets;
    }
  }

  for (NodeId h : state.clusterHeads) {
    if (ledger.residual(h) < tE) {
      outcome.droppedPackets += inbox[h].size();
      continue;
    }
    AggregateResult fused = aggregate(params.aggregation, inbox[h], b, b, h);
    const double fusion = fused.inputCount > 1 ? fusion_energy(params.radio, fused.inputBits) : 0.0;
    ledger.charge(h, tx_energy(params.radio, fused.packet.bits, field.distance_to_bs(h)), 0.0,
                  fusion);
    ++outcome.packetsToBs;
    outcome.bitsToBs += fused.packet.bits;
    ++outcome.directHop0;
    outcome.maxRelayPath = std::max(outcome.maxRelayPath, fused.packet.relays);
    outcome.hops.push_back(
        HopRecord{h, kBaseStation, field.nodes[h].hopCount, -1, 0.0, fused.packet.bits});
  }

  update_liveness(field, ledger, tE);
  return outcome;
}

/// True while every current head is alive and holds at least
/// `headRetainThreshold` of the energy it had when elected.
inline bool heads_retained(const ClusterState& state, const EnergyLedger& ledger,
                           const LeachParams& params, double tE) {
  if (state.clusterHeads.empty()) return false;
  for (NodeId h : state.clusterHeads) {
    const double re = ledger.residual(h);
    if (re < tE || re < params.headRetainThreshold * state.energyAtElection[h]) return false;
  }
  return true;
}

/// MODLEACH round: keep the current heads while they all pass the retention
/// test, otherwise re-elect as LEACH does; member links use reduced power.
inline RoundOutcome modleach_round(Field& field, ClusterState& state, EnergyLedger& ledger,
                                   const RoutingParams& params, const LeachParams& leachParams,
                                   int round, Rng& rng) {
  if (heads_retained(state, ledger, leachParams, params.energyThreshold)) {
    state.round = round;
    for (NodeId h : state.clusterHeads) state.lastHeadRound[h] = round;
    assign_members(state, field);
  } else {
    state = leach_elect_heads(field, ledger, leachParams, round, rng, std::move(state));
  }
  return leach_round(field, state, ledger, params, leachParams.dualPowerIntraFactor);
}

}  // namespace rfdmrp::leach
