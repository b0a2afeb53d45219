#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fogcache/config.hpp"
#include "fogcache/popularity.hpp"
#include "fogcache/radio.hpp"
#include "fogcache/rng.hpp"
#include "fogcache/topology.hpp"

namespace fogcache {

/// Exogenous draws for one slot, shared by every scheme in a run.
struct SlotRealization {
  std::size_t t = 0;
  UserLayout layout;
  std::vector<double> gains;                // |h|^2 per user toward its serving F-AP
  std::vector<PopularityVector> popularity; // per F-AP
  Grid z1;                                  // request-weighted F-AP-to-user delay, N x F
  std::vector<FileId> requests;             // one request per F-AP
};

/// Request-conditional Z1 for each (n, f):
///   sum_{u in U_n} p_{u,f} Z1_{n,u} / sum_{u in U_n} p_{u,f}
/// so that sum_f P_{n,f} Z1_{n,f} is each F-AP's expected air-interface delay.
Grid expected_user_delay(const PreferenceProfile& profile, const UserLayout& layout,
                         std::span<const double> gains, const RadioParams& radio,
                         std::size_t n_faps);

/// Generates slot realizations from seed-derived streams (placement, channel,
/// preference, one request stream per F-AP) with one slot of look-ahead, so a
/// learner can see the request that forms its next state.
class Environment {
 public:
  Environment(const SimConfig& cfg, const Topology& topology);

  const SlotRealization& current() const { return current_; }
  const SlotRealization& upcoming() const { return upcoming_; }
  void advance();

  /// FNV-1a digest of every draw generated so far.
  std::uint64_t stream_hash() const { return hash_; }

 private:
  SlotRealization generate(std::size_t t);
  void mix(const void* data, std::size_t bytes);

  const SimConfig& cfg_;
  const Topology& topology_;
  RadioParams radio_;
  Rng placement_;
  Rng channel_;
  Rng preference_;
  std::vector<Rng> request_;
  PreferenceProfile profile_;
  UserLayout layout_;
  SlotRealization current_;
  SlotRealization upcoming_;
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

}  // namespace fogcache
