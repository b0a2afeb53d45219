#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fogcache {

using Rng = std::mt19937_64;

/// Independent stream families. Each consumer draws from its own stream so
/// that adding or removing a scheme never perturbs another scheme's draws.
enum class Stream : std::uint64_t {
  placement = 1,
  channel = 2,
  preference = 3,
  request = 4,
  exploration = 5,
  replay = 6,
  init = 7,
};

/// Deterministic stream for (seed, family, index).
Rng make_stream(std::uint64_t seed, Stream family, std::uint64_t index = 0);

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace fogcache
