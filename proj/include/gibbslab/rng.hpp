#pragma once

// Counter-based random numbers: every draw is a hash of its coordinates, so a
// replica's trajectory does not depend on which thread runs it.

#include <cstdint>

namespace gibbslab {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t replica, std::uint64_t sweep,
                                  std::uint64_t site) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ replica);
  h = mix64(h ^ sweep);
  return mix64(h ^ site);
}

/// Uniform on [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t replica, std::uint64_t sweep,
                              std::uint64_t site) {
  return double(counter_bits(seed, replica, sweep, site) >> 11) * 0x1.0p-53;
}

}  // namespace gibbslab
