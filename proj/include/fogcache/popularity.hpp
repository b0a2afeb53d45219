#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fogcache/config.hpp"
#include "fogcache/rng.hpp"
#include "fogcache/topology.hpp"

namespace fogcache {

/// Library file id, 1-based. 0 marks an empty cache slot.
using FileId = std::uint32_t;

/// Per-user Zipf preferences over individually permuted ranks.
struct PreferenceProfile {
  std::size_t library_size = 0;
  double skewness = 1.1;
  /// rank[u][f - 1] is the popularity rank user u assigns to file f (1..F).
  std::vector<std::vector<std::uint32_t>> rank;

  std::size_t n_users() const { return rank.size(); }
  /// Zipf normalizer sum_{i=1..F} i^-tau.
  double normalizer() const;
};

/// Uniformly random rank permutation per user.
PreferenceProfile make_profile(std::size_t n_users, std::size_t library_size, double skewness,
                               Rng& rng);

/// p_{u,f} = rank_u(f)^-tau / sum_i i^-tau. Throws DomainError for f outside 1..F.
double user_preference(const PreferenceProfile& profile, std::size_t user, FileId file);

/// User u's full preference vector, indexed by f - 1.
std::vector<double> preference_vector(const PreferenceProfile& profile, std::size_t user);

/// Per-F-AP request distribution, indexed by f - 1.
struct PopularityVector {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
  double total() const;
};

/// Mean (or literal sum) over the F-AP's users of their preference vectors.
/// Throws EmptyRegionError when the F-AP serves nobody.
PopularityVector fap_popularity(const PreferenceProfile& profile, const UserLayout& layout,
                                std::size_t fap, Aggregation aggregation = Aggregation::mean);

/// Draws a file id with probability proportional to `popularity`.
FileId sample_request(const PopularityVector& popularity, Rng& rng);

/// Consistent preferences keep every permutation; inconsistent ones redraw
/// all permutations uniformly.
PreferenceProfile advance_preferences(const PreferenceProfile& profile, bool consistent,
                                      Rng& rng);

}  // namespace fogcache
