#include "fogcache/rng.hpp"

namespace fogcache {

Rng make_stream(std::uint64_t seed, Stream family, std::uint64_t index) {
  const auto fam = static_cast<std::uint64_t>(family);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(fam), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace fogcache
