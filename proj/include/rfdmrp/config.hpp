#pragma once

// Flat `key = value` configuration files and `--set key=value` overrides.
//
//   # comment
//   nodeCount = 200
//   gamma = 0.25
//   protocol = LEACH
//
// Keys mirror SimConfig field names. Unknown keys, malformed values and
// out-of-range settings are rejected with a message naming the source.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rfdmrp/rfd.hpp"
#include "rfdmrp/sim_config.hpp"

namespace rfdmrp::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline double parse_real(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("expected a number, got '" + text + "'");
  return value;
}

inline unsigned long long parse_unsigned(const std::string& text) {
  unsigned long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("expected a non-negative integer, got '" + text + "'");
  return value;
}

inline bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("expected a boolean, got '" + text + "'");
}

template <class Target>
using Setter = std::function<void(Target&, const std::string&)>;

inline const std::map<std::string, Setter<SimConfig>, std::less<>>& sim_keys() {
  static const std::map<std::string, Setter<SimConfig>, std::less<>> keys{
      {"nodeCount", [](SimConfig& c, const std::string& v) { c.nodeCount = parse_unsigned(v); }},
      {"fieldWidth", [](SimConfig& c, const std::string& v) { c.fieldWidth = parse_real(v); }},
      {"fieldHeight", [](SimConfig& c, const std::string& v) { c.fieldHeight = parse_real(v); }},
      {"bsX", [](SimConfig& c, const std::string& v) { c.bsPosition.x = parse_real(v); }},
      {"bsY", [](SimConfig& c, const std::string& v) { c.bsPosition.y = parse_real(v); }},
      {"initialEnergy", [](SimConfig& c, const std::string& v) { c.initialEnergy = parse_real(v); }},
      {"eElec",
       [](SimConfig& c, const std::string& v) { c.radio.eTxElec = c.radio.eRxElec = parse_real(v); }},
      {"eTxElec", [](SimConfig& c, const std::string& v) { c.radio.eTxElec = parse_real(v); }},
      {"eRxElec", [](SimConfig& c, const std::string& v) { c.radio.eRxElec = parse_real(v); }},
      {"epsFs", [](SimConfig& c, const std::string& v) { c.radio.epsFs = parse_real(v); }},
      {"epsMp", [](SimConfig& c, const std::string& v) { c.radio.epsMp = parse_real(v); }},
      {"eDa", [](SimConfig& c, const std::string& v) { c.radio.eDa = parse_real(v); }},
      {"packetBits", [](SimConfig& c, const std::string& v) { c.packetBits = parse_unsigned(v); }},
      {"packetBytes",
       [](SimConfig& c, const std::string& v) { c.packetBits = 8 * parse_unsigned(v); }},
      {"transmissionRange",
       [](SimConfig& c, const std::string& v) { c.transmissionRange = parse_real(v); }},
      {"gamma", [](SimConfig& c, const std::string& v) { c.gamma = parse_real(v); }},
      {"protocol",
       [](SimConfig& c, const std::string& v) {
         const auto p = parse_protocol(v);
         if (!p) throw ConfigError("unknown protocol '" + v + "'");
         c.protocol = *p;
       }},
      {"seed", [](SimConfig& c, const std::string& v) { c.seed = parse_unsigned(v); }},
      {"maxRounds",
       [](SimConfig& c, const std::string& v) {
         const auto r = parse_unsigned(v);
         if (r > 100000000ULL) throw ConfigError("maxRounds is too large");
         c.maxRounds = static_cast<int>(r);
       }},
      {"energyThresholdFraction",
       [](SimConfig& c, const std::string& v) { c.energyThresholdFraction = parse_real(v); }},
      {"leachP", [](SimConfig& c, const std::string& v) { c.leach.pDesired = parse_real(v); }},
      {"headRetainThreshold",
       [](SimConfig& c, const std::string& v) { c.leach.headRetainThreshold = parse_real(v); }},
      {"dualPowerIntraFactor",
       [](SimConfig& c, const std::string& v) { c.leach.dualPowerIntraFactor = parse_real(v); }},
      {"chargeControl", [](SimConfig& c, const std::string& v) { c.chargeControl = parse_bool(v); }},
      {"controlBits", [](SimConfig& c, const std::string& v) { c.controlBits = parse_unsigned(v); }},
      {"nodeFile", [](SimConfig& c, const std::string& v) { c.nodeFile = v; }},
  };
  return keys;
}

inline const std::map<std::string, Setter<rfd::RfdParams>, std::less<>>& rfd_keys() {
  static const std::map<std::string, Setter<rfd::RfdParams>, std::less<>> keys{
      {"erosionRate", [](rfd::RfdParams& p, const std::string& v) { p.erosionRate = parse_real(v); }},
      {"sedimentFraction",
       [](rfd::RfdParams& p, const std::string& v) { p.sedimentFraction = parse_real(v); }},
      {"maxIterations",
       [](rfd::RfdParams& p, const std::string& v) {
         p.maxIterations = static_cast<int>(std::min(parse_unsigned(v), 100000000ULL));
       }},
      {"convergenceWindow",
       [](rfd::RfdParams& p, const std::string& v) {
         p.convergenceWindow = static_cast<int>(std::min(parse_unsigned(v), 100000000ULL));
       }},
  };
  return keys;
}

template <class Target, class Keys>
void apply(Target& target, const Keys& keys, const std::string& key, const std::string& value,
           const std::string& where) {
  const auto it = keys.find(key);
  if (it == keys.end()) throw ConfigError(where + ": unknown key '" + key + "'");
  try {
    it->second(target, value);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + key + ": " + e.what());
  }
}

template <class Target, class Keys>
void apply_stream(Target& target, const Keys& keys, std::istream& in, const std::string& name) {
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    const std::string where = name + ":" + std::to_string(lineNo);
    if (eq == std::string::npos) throw ConfigError(where + ": expected `key = value`");
    apply(target, keys, trim(content.substr(0, eq)), trim(content.substr(eq + 1)), where);
  }
}

template <class Target, class Keys>
void apply_overrides(Target& target, const Keys& keys, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set " + item + ": expected key=value");
    apply(target, keys, trim(item.substr(0, eq)), trim(item.substr(eq + 1)), "--set " + item);
  }
}

}  // namespace detail

inline SimConfig parse_config(std::istream& in, const std::string& name,
                              const std::vector<std::string>& overrides = {}) {
  SimConfig config;
  detail::apply_stream(config, detail::sim_keys(), in, name);
  detail::apply_overrides(config, detail::sim_keys(), overrides);
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(name + ": " + e.what());
  }
  return config;
}

/// Reads `path` (or starts from defaults when empty), then applies overrides.
inline SimConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  if (path.empty()) {
    std::istringstream empty;
    return parse_config(empty, "defaults", overrides);
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, path, overrides);
}

/// River-formation parameters from `--set` overrides.
inline rfd::RfdParams rfd_params_from(const std::vector<std::string>& overrides) {
  rfd::RfdParams params;
  detail::apply_overrides(params, detail::rfd_keys(), overrides);
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return params;
}

}  // namespace rfdmrp::config
