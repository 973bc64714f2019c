#pragma once

// Round loop, per-round metrics and experiment batches.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "rfdmrp/leach.hpp"
#include "rfdmrp/radio.hpp"
#include "rfdmrp/random.hpp"
#include "rfdmrp/routing.hpp"
#include "rfdmrp/sim_config.hpp"
#include "rfdmrp/stats.hpp"
#include "rfdmrp/topology.hpp"

namespace rfdmrp {

struct RoundMetrics {
  Protocol protocol = Protocol::RFDMRP;
  std::uint64_t seed = 0;
  int round = 0;
  std::size_t dead = 0;
  std::size_t alive = 0;
  double remainingEnergy = 0.0;
  std::uint64_t packetsToBs = 0;  // cumulative
  std::size_t directHop0 = 0;
  std::size_t directFallback = 0;
  // Not exported; kept for invariant checks.
  int maxRelayPath = 0;
  double conservationError = 0.0;
};

struct LifetimeSummary {
  int firstDeath = 0;
  int halfDeath = 0;
  int lastDeath = 0;
  // The run hit maxRounds before the last node died; unreached events
  // report the final round.
  bool censored = false;
};

struct SimulationResult {
  SimConfig config;
  std::size_t nodeCount = 0;
  int regionCount = 0;
  std::vector<RoundMetrics> rounds;
  LifetimeSummary lifetime;
  double maxConservationError = 0.0;
};

/// Per-round hook for diagnostics and invariant tests.
using RoundObserver = std::function<void(const RoundMetrics&, const Field&, const EnergyLedger&,
                                         const RoundOutcome&)>;

inline Field initial_field(const SimConfig& config) {
  if (!config.nodeFile.empty()) {
    std::ifstream in(config.nodeFile);
    if (!in) throw std::runtime_error("cannot open node list " + config.nodeFile);
    return load_node_list(in, config);
  }
  Rng deployment = make_stream(config.seed, StreamPurpose::Deployment);
  return deploy_nodes(config, deployment);
}

namespace detail {

inline RoundMetrics snapshot(const SimConfig& config, int round, const Field& field,
                             const EnergyLedger& ledger, std::uint64_t packetsToBs,
                             const RoundOutcome* outcome) {
  RoundMetrics m;
  m.protocol = config.protocol;
  m.seed = config.seed;
  m.round = round;
  m.alive = field.alive_count();
  m.dead = field.nodes.size() - m.alive;
  m.remainingEnergy = ledger.remaining();
  m.packetsToBs = packetsToBs;
  if (outcome) {
    m.directHop0 = outcome->directHop0;
    m.directFallback = outcome->directFallback;
    m.maxRelayPath = outcome->maxRelayPath;
  }
  m.conservationError = ledger.conservation_error();
  return m;
}

inline LifetimeSummary summarize(const std::vector<RoundMetrics>& rounds, std::size_t nodeCount) {
  LifetimeSummary s;
  const std::size_t half = (nodeCount + 1) / 2;
  bool first = false, mid = false, last = false;
  for (const auto& m : rounds) {
    if (!first && m.dead >= 1) s.firstDeath = m.round, first = true;
    if (!mid && m.dead >= half) s.halfDeath = m.round, mid = true;
    if (!last && m.alive == 0) s.lastDeath = m.round, last = true;
  }
  const int final = rounds.empty() ? 0 : rounds.back().round;
  if (!first) s.firstDeath = final;
  if (!mid) s.halfDeath = final;
  if (!last) {
    s.lastDeath = final;
    s.censored = true;
  }
  return s;
}

}  // namespace detail

/// Runs one protocol from deployment until every node is dead or
/// `maxRounds` is reached. Row 0 is the state after initialization.
inline SimulationResult run_simulation(const SimConfig& config, const RoundObserver& observer = {}) {
  config.validate();
  SimulationResult result;
  result.config = config;

  Field field = initial_field(config);
  const std::size_t n = field.nodes.size();
  result.nodeCount = n;
  result.config.nodeCount = n;
  EnergyLedger ledger(n, config.initialEnergy);
  const double tE = config.energy_threshold();
  const double tr = config.transmissionRange;

  ControlSink control;
  if (config.chargeControl) {
    control = [&ledger, &config](const ControlPacket& packet, double d) {
      if (packet.srcId != kBaseStation)
        ledger.charge(packet.srcId, tx_energy(config.radio, config.controlBits, d), 0.0, 0.0);
      if (packet.destId != kBaseStation)
        ledger.charge(packet.destId, 0.0, rx_energy(config.radio, config.controlBits), 0.0);
    };
  }

  beacon_exchange(field, tr, control);
  result.regionCount = region_count(field, tr);
  NeighborTables tables;
  if (config.protocol == Protocol::RFDMRP) tables = build_nn_tables(field, ledger, tr, control);
  update_liveness(field, ledger, tE);

  RoutingParams routing{config.radio, config.packetBits, tE, AggregationPolicy{config.gamma}};
  Rng forwarding = make_stream(config.seed, StreamPurpose::Forwarding);
  Rng election = make_stream(config.seed, StreamPurpose::Election);
  leach::ClusterState clusters = leach::ClusterState::initial(n);

  std::uint64_t packetsToBs = 0;
  result.rounds.push_back(detail::snapshot(config, 0, field, ledger, 0, nullptr));

  for (int round = 1; round <= config.maxRounds; ++round) {
    update_liveness(field, ledger, tE);
    if (field.alive_count() == 0) break;

    RoundOutcome outcome;
    switch (config.protocol) {
      case Protocol::RFDMRP: {
        auto relayed = relay_round(field, tables, ledger, routing, forwarding, control);
        if (!relayed) break;
        outcome = std::move(*relayed);
        break;
      }
      case Protocol::LEACH:
        clusters = leach::leach_elect_heads(field, ledger, config.leach, round, election,
                                            std::move(clusters));
        outcome = leach::leach_round(field, clusters, ledger, routing);
        break;
      case Protocol::MODLEACH:
        outcome = leach::modleach_round(field, clusters, ledger, routing, config.leach, round,
                                        election);
        break;
    }
    update_liveness(field, ledger, tE);
    packetsToBs += outcome.packetsToBs;
    result.rounds.push_back(detail::snapshot(config, round, field, ledger, packetsToBs, &outcome));
    if (observer) observer(result.rounds.back(), field, ledger, outcome);
  }

  for (const auto& m : result.rounds)
    result.maxConservationError = std::max(result.maxConservationError, m.conservationError);
  result.lifetime = detail::summarize(result.rounds, n);
  return result;
}

// ---------------------------------------------------------------------------
// Batches

/// Runs every config on a small worker pool; results come back in input
/// order regardless of scheduling.
inline std::vector<SimulationResult> run_batch(const std::vector<SimConfig>& configs,
                                               unsigned workers = 0) {
  std::vector<SimulationResult> results(configs.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, configs.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(configs.size());
  auto work = [&] {
    for (std::size_t k = next++; k < configs.size(); k = next++) {
      try {
        results[k] = run_simulation(configs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

struct LifetimeRecord {
  Protocol protocol = Protocol::RFDMRP;
  std::string paramName;
  double paramValue = 0.0;
  std::uint64_t seed = 0;
  LifetimeSummary lifetime;
};

struct MedianRecord {
  Protocol protocol = Protocol::RFDMRP;
  std::string paramName;
  double paramValue = 0.0;
  std::size_t runs = 0;
  double firstDeath = 0.0;
  double halfDeath = 0.0;
  double lastDeath = 0.0;
};

inline const std::vector<Protocol>& all_protocols() {
  static const std::vector<Protocol> all{Protocol::RFDMRP, Protocol::LEACH, Protocol::MODLEACH};
  return all;
}

/// Generic parameter sweep. Rows are ordered by (parameter, seed, protocol).
inline std::vector<LifetimeRecord> sweep(const SimConfig& base, const std::string& paramName,
                                         const std::vector<double>& values,
                                         const std::function<void(SimConfig&, double)>& apply,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::vector<Protocol>& protocols) {
  if (values.empty()) throw std::invalid_argument(paramName + " list is empty");
  if (seeds.empty()) throw std::invalid_argument("seed list is empty");
  if (protocols.empty()) throw std::invalid_argument("protocol list is empty");
  std::vector<SimConfig> configs;
  std::vector<LifetimeRecord> records;
  for (double value : values)
    for (std::uint64_t seed : seeds)
      for (Protocol protocol : protocols) {
        SimConfig c = base;
        apply(c, value);
        c.seed = seed;
        c.protocol = protocol;
        c.validate();
        configs.push_back(c);
        records.push_back(LifetimeRecord{protocol, paramName, value, seed, {}});
      }
  const auto results = run_batch(configs);
  for (std::size_t k = 0; k < results.size(); ++k) records[k].lifetime = results[k].lifetime;
  return records;
}

inline std::vector<LifetimeRecord> sweep_density(const SimConfig& base,
                                                 const std::vector<std::size_t>& nodeCounts,
                                                 const std::vector<std::uint64_t>& seeds,
                                                 const std::vector<Protocol>& protocols = all_protocols()) {
  std::vector<double> values;
  for (std::size_t count : nodeCounts) {
    if (count < 1) throw std::invalid_argument("node counts must be at least 1");
    values.push_back(static_cast<double>(count));
  }
  return sweep(base, "node_count", values,
               [](SimConfig& c, double v) {
                 c.nodeCount = static_cast<std::size_t>(v);
                 c.nodeFile.clear();
               },
               seeds, protocols);
}

inline std::vector<LifetimeRecord> sweep_gamma(const SimConfig& base,
                                               const std::vector<double>& gammas,
                                               const std::vector<std::uint64_t>& seeds,
                                               const std::vector<Protocol>& protocols = all_protocols()) {
  for (double g : gammas)
    if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("gamma values must lie in [0, 1]");
  return sweep(base, "gamma", gammas, [](SimConfig& c, double v) { c.gamma = v; }, seeds,
               protocols);
}

/// Medians over seeds for every (protocol, parameter value) cell, ordered
/// by protocol then by first appearance of the value.
inline std::vector<MedianRecord> median_table(const std::vector<LifetimeRecord>& records) {
  std::vector<MedianRecord> table;
  std::map<std::tuple<int, double>, std::size_t> index;
  std::vector<std::vector<double>> first, half, last;
  for (const auto& r : records) {
    const auto key = std::make_tuple(static_cast<int>(r.protocol), r.paramValue);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, table.size()).first;
      table.push_back(MedianRecord{r.protocol, r.paramName, r.paramValue, 0, 0, 0, 0});
      first.emplace_back();
      half.emplace_back();
      last.emplace_back();
    }
    const std::size_t k = it->second;
    ++table[k].runs;
    first[k].push_back(r.lifetime.firstDeath);
    half[k].push_back(r.lifetime.halfDeath);
    last[k].push_back(r.lifetime.lastDeath);
  }
  for (std::size_t k = 0; k < table.size(); ++k) {
    table[k].firstDeath = stats::median(first[k]);
    table[k].halfDeath = stats::median(half[k]);
    table[k].lastDeath = stats::median(last[k]);
  }
  std::stable_sort(table.begin(), table.end(), [](const MedianRecord& a, const MedianRecord& b) {
    return static_cast<int>(a.protocol) < static_cast<int>(b.protocol);
  });
  return table;
}

}  // namespace rfdmrp
