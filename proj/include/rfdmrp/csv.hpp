#pragma once

#include <charconv>
#include <ostream>
#include <span>
#include <string>

#include "rfdmrp/simulator.hpp"

namespace rfdmrp::csv {

inline constexpr const char* kRoundHeader =
    "protocol,seed,round,dead,alive,remaining_energy_j,packets_to_bs,direct_to_bs_hop0,"
    "direct_to_bs_fallback";
inline constexpr const char* kSummaryHeader =
    "protocol,param_name,param_value,seed,first_death,half_death,last_death";
inline constexpr const char* kMedianHeader =
    "protocol,param_name,param_value,runs,first_death,half_death,last_death";

/// Shortest round-trip representation, always with a decimal point or
/// exponent so the column reads as floating point ("50.0", not "50").
inline std::string format_real(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, end);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

/// Integral parameters (node counts) print without a fraction.
inline std::string format_param(double value) {
  if (value == static_cast<double>(static_cast<long long>(value)))
    return std::to_string(static_cast<long long>(value));
  return format_real(value);
}

inline void write_round_header(std::ostream& out) { out << kRoundHeader << '\n'; }

inline void write_round_rows(std::ostream& out, std::span<const RoundMetrics> rounds) {
  for (const auto& m : rounds) {
    out << to_string(m.protocol) << ',' << m.seed << ',' << m.round << ',' << m.dead << ','
        << m.alive << ',' << format_real(m.remainingEnergy) << ',' << m.packetsToBs << ','
        << m.directHop0 << ',' << m.directFallback << '\n';
  }
}

inline void write_summary(std::ostream& out, std::span<const LifetimeRecord> records) {
  out << kSummaryHeader << '\n';
  for (const auto& r : records)
    out << to_string(r.protocol) << ',' << r.paramName << ',' << format_param(r.paramValue) << ','
        << r.seed << ',' << r.lifetime.firstDeath << ',' << r.lifetime.halfDeath << ','
        << r.lifetime.lastDeath << '\n';
}

inline void write_medians(std::ostream& out, std::span<const MedianRecord> rows) {
  out << kMedianHeader << '\n';
  for (const auto& r : rows)
    out << to_string(r.protocol) << ',' << r.paramName << ',' << format_param(r.paramValue) << ','
        << r.runs << ',' << format_real(r.firstDeath) << ',' << format_real(r.halfDeath) << ','
        << format_real(r.lastDeath) << '\n';
}

}  // namespace rfdmrp::csv
