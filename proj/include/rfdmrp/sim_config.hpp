#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rfdmrp/geometry.hpp"
#include "rfdmrp/radio.hpp"

namespace rfdmrp {

enum class Protocol { RFDMRP, LEACH, MODLEACH };

inline std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::RFDMRP: return "RFDMRP";
    case Protocol::LEACH: return "LEACH";
    case Protocol::MODLEACH: return "MODLEACH";
  }
  return "?";
}

inline std::optional<Protocol> parse_protocol(std::string_view name) {
  std::string upper(name);
  for (char& c : upper)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  if (upper == "RFDMRP") return Protocol::RFDMRP;
  if (upper == "LEACH") return Protocol::LEACH;
  if (upper == "MODLEACH" || upper == "MOD_LEACH") return Protocol::MODLEACH;
  return std::nullopt;
}

/// Baseline clustering constants.
struct LeachParams {
  double pDesired = 0.05;
  // MODLEACH: a head is kept while RE >= threshold * RE at election.
  double headRetainThreshold = 0.5;
  // MODLEACH: amplifier scaling for member -> head transmissions.
  double dualPowerIntraFactor = 0.5;

  void validate() const {
    if (!(pDesired > 0.0 && pDesired < 1.0))
      throw std::invalid_argument("leachP must lie in (0, 1)");
    if (!(headRetainThreshold >= 0.0 && headRetainThreshold <= 1.0))
      throw std::invalid_argument("headRetainThreshold must lie in [0, 1]");
    if (!(dualPowerIntraFactor > 0.0 && dualPowerIntraFactor <= 1.0))
      throw std::invalid_argument("dualPowerIntraFactor must lie in (0, 1]");
  }
};

/// Everything one simulation run needs. A default-constructed config is
/// the reference scenario: 100 nodes on 100 m x 100 m, sink at (50, 50),
/// 0.5 J per node, 4096-byte packets, 20 m transmission range.
struct SimConfig {
  std::size_t nodeCount = 100;
  double fieldWidth = 100.0;
  double fieldHeight = 100.0;
  Point bsPosition{50.0, 50.0};
  double initialEnergy = 0.5;
  RadioParams radio;
  Bits packetBits = 4096 * 8;
  double transmissionRange = 20.0;
  double gamma = 0.0;
  Protocol protocol = Protocol::RFDMRP;
  std::uint64_t seed = 1;
  int maxRounds = 10000;
  // Nodes below this fraction of the initial energy are dead.
  double energyThresholdFraction = 0.2;
  LeachParams leach;
  // Setup and ENERGY_LEVEL traffic is free unless this is set.
  bool chargeControl = false;
  Bits controlBits = 200;
  // Optional "id, x, y" node list replacing random deployment.
  std::string nodeFile;

  double energy_threshold() const {
    return energyThresholdFraction * initialEnergy;
  }

  void validate() const {
    if (nodeCount < 1 && nodeFile.empty())
      throw std::invalid_argument("nodeCount must be at least 1");
    if (!(fieldWidth > 0.0) || !(fieldHeight > 0.0))
      throw std::invalid_argument("field dimensions must be positive");
    if (!(initialEnergy > 0.0))
      throw std::invalid_argument("initialEnergy must be positive");
    radio.validate();
    if (packetBits == 0) throw std::invalid_argument("packetBits must be positive");
    if (!(transmissionRange > 0.0))
      throw std::invalid_argument("transmissionRange must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw std::invalid_argument("gamma must lie in [0, 1]");
    if (maxRounds < 1) throw std::invalid_argument("maxRounds must be at least 1");
    if (!(energyThresholdFraction >= 0.0 && energyThresholdFraction < 1.0))
      throw std::invalid_argument("energyThresholdFraction must lie in [0, 1)");
    leach.validate();
    if (chargeControl && controlBits == 0)
      throw std::invalid_argument("controlBits must be positive when chargeControl is set");
  }
};

}  // namespace rfdmrp
