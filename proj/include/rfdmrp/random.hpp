#pragma once

#include <cstdint>
#include <random>

namespace rfdmrp {

using Rng = std::mt19937_64;

// Purpose tags for substreams derived from one master seed. Protocols that
// share a seed share the deployment stream and therefore the topology.
enum class StreamPurpose : std::uint32_t {
  Deployment = 1,
  Election = 2,
  Forwarding = 3,
  RiverFormation = 4,
};

// Splitting rule: seed_seq{low32(seed), high32(seed), purpose} feeds a
// mt19937_64. Both seed_seq and mt19937_64 are fully specified by the
// standard, so streams are identical across toolchains.
inline Rng make_stream(std::uint64_t seed, StreamPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return Rng(seq);
}

// Uniform in [0, 1) from the top 53 bits. Used instead of
// std::uniform_real_distribution, whose output is implementation-defined.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace rfdmrp
