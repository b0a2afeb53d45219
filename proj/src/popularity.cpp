#include "fogcache/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fogcache/errors.hpp"

namespace fogcache {

namespace {

std::vector<std::uint32_t> random_permutation(std::size_t size, Rng& rng) {
  std::vector<std::uint32_t> perm(size);
  std::iota(perm.begin(), perm.end(), 1u);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace

double PreferenceProfile::normalizer() const {
  double sum = 0.0;
  for (std::size_t i = 1; i <= library_size; ++i) {
    sum += std::pow(static_cast<double>(i), -skewness);
  }
  return sum;
}

PreferenceProfile make_profile(std::size_t n_users, std::size_t library_size, double skewness,
                               Rng& rng) {
  if (!(skewness > 0.0)) throw DomainError("make_profile: skewness must be > 0");
  PreferenceProfile profile;
  profile.library_size = library_size;
  profile.skewness = skewness;
  profile.rank.reserve(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    profile.rank.push_back(random_permutation(library_size, rng));
  }
  return profile;
}

double user_preference(const PreferenceProfile& profile, std::size_t user, FileId file) {
  if (file < 1 || file > profile.library_size) {
    throw DomainError("user_preference: file " + std::to_string(file) + " outside 1.." +
                      std::to_string(profile.library_size));
  }
  if (user >= profile.n_users()) throw DomainError("user_preference: unknown user");
  const double r = profile.rank[user][file - 1];
  return std::pow(r, -profile.skewness) / profile.normalizer();
}

std::vector<double> preference_vector(const PreferenceProfile& profile, std::size_t user) {
  if (user >= profile.n_users()) throw DomainError("preference_vector: unknown user");
  const double z = profile.normalizer();
  std::vector<double> p(profile.library_size);
  for (std::size_t f = 0; f < profile.library_size; ++f) {
    p[f] = std::pow(static_cast<double>(profile.rank[user][f]), -profile.skewness) / z;
  }
  return p;
}

double PopularityVector::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

PopularityVector fap_popularity(const PreferenceProfile& profile, const UserLayout& layout,
                                std::size_t fap, Aggregation aggregation) {
  const auto users = layout.members(fap);
  if (users.empty()) {
    throw EmptyRegionError("fap_popularity: F-AP " + std::to_string(fap) + " serves no users");
  }
  // Rank-power table shared by every member.
  const double z = profile.normalizer();
  std::vector<double> by_rank(profile.library_size + 1, 0.0);
  for (std::size_t i = 1; i <= profile.library_size; ++i) {
    by_rank[i] = std::pow(static_cast<double>(i), -profile.skewness) / z;
  }
  PopularityVector out;
  out.probs.assign(profile.library_size, 0.0);
  for (auto u : users) {
    const auto& ranks = profile.rank[u];
    for (std::size_t f = 0; f < profile.library_size; ++f) out.probs[f] += by_rank[ranks[f]];
  }
  if (aggregation == Aggregation::mean) {
    const double inv = 1.0 / static_cast<double>(users.size());
    for (auto& p : out.probs) p *= inv;
  }
  return out;
}

FileId sample_request(const PopularityVector& popularity, Rng& rng) {
  const double target = uniform01(rng) * popularity.total();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t f = 0; f < popularity.size(); ++f) {
    if (popularity[f] <= 0.0) continue;
    acc += popularity[f];
    last_positive = f;
    if (target < acc) return static_cast<FileId>(f + 1);
  }
  // Rounding can leave target == acc at the top end.
  return static_cast<FileId>(last_positive + 1);
}

PreferenceProfile advance_preferences(const PreferenceProfile& profile, bool consistent,
                                      Rng& rng) {
  if (consistent) return profile;
  PreferenceProfile next = profile;
  for (auto& perm : next.rank) perm = random_permutation(profile.library_size, rng);
  return next;
}

}  // namespace fogcache
