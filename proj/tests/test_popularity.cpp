#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fogcache/errors.hpp"
#include "fogcache/popularity.hpp"

using namespace fogcache;

namespace {

PreferenceProfile identity_profile(std::size_t users, std::size_t f, double tau) {
  PreferenceProfile p;
  p.library_size = f;
  p.skewness = tau;
  p.rank.assign(users, std::vector<std::uint32_t>(f));
  for (auto& r : p.rank) std::iota(r.begin(), r.end(), 1u);
  return p;
}

UserLayout one_fap_layout(std::size_t users) {
  UserLayout l;
  l.serving.assign(users, 0);
  l.positions.assign(users, Point{1.0, 0.0});
  l.distances.assign(users, 1.0);
  return l;
}

bool is_permutation_of_ranks(const std::vector<std::uint32_t>& r) {
  auto s = r;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != i + 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("user preference follows the Zipf law over permuted ranks") {
  const auto p = identity_profile(1, 3, 1.0);
  CHECK(user_preference(p, 0, 1) == doctest::Approx(6.0 / 11.0).epsilon(1e-14));
  CHECK(user_preference(p, 0, 3) == doctest::Approx(2.0 / 11.0).epsilon(1e-14));

  const auto single = identity_profile(1, 1, 1.1);
  CHECK(user_preference(single, 0, 1) == doctest::Approx(1.0));

  CHECK_THROWS_AS(user_preference(p, 0, 0), DomainError);
  CHECK_THROWS_AS(user_preference(p, 0, 4), DomainError);
}

TEST_CASE("preference vectors normalize and are monotone in rank") {
  Rng rng = make_stream(5, Stream::preference);
  const auto p = make_profile(20, 37, 1.1, rng);
  for (std::size_t u = 0; u < p.n_users(); ++u) {
    CHECK(is_permutation_of_ranks(p.rank[u]));
    const auto v = preference_vector(p, u);
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = 0; b < v.size(); ++b)
        if (p.rank[u][a] < p.rank[u][b]) CHECK(v[a] >= v[b]);
  }
}

TEST_CASE("F-AP popularity is the mean of member preferences") {
  SUBCASE("one user") {
    Rng rng = make_stream(1, Stream::preference);
    const auto p = make_profile(1, 6, 1.1, rng);
    const auto pop = fap_popularity(p, one_fap_layout(1), 0);
    CHECK(pop.probs == preference_vector(p, 0));
  }
  SUBCASE("mirrored two-file preferences average to uniform") {
    auto p = identity_profile(2, 2, 1.0);
    p.rank[1] = {2, 1};
    const auto pop = fap_popularity(p, one_fap_layout(2), 0);
    CHECK(pop[0] == doctest::Approx(0.5));
    CHECK(pop[1] == doctest::Approx(0.5));
  }
  SUBCASE("three users, F=4, fixed permutations vs long-double recomputation") {
    auto p = identity_profile(3, 4, 1.1);
    p.rank[0] = {1, 2, 3, 4};
    p.rank[1] = {4, 3, 2, 1};
    p.rank[2] = {2, 4, 1, 3};
    long double norm = 0.0L;
    for (int i = 1; i <= 4; ++i) norm += std::pow(static_cast<long double>(i), -1.1L);
    const auto pop = fap_popularity(p, one_fap_layout(3), 0);
    for (std::size_t f = 0; f < 4; ++f) {
      long double expected = 0.0L;
      for (std::size_t u = 0; u < 3; ++u) {
        expected += std::pow(static_cast<long double>(p.rank[u][f]), -1.1L) / norm;
      }
      expected /= 3.0L;
      CHECK(pop[f] == doctest::Approx(static_cast<double>(expected)).epsilon(1e-13));
    }
    CHECK(pop.total() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("literal sum variant scales with membership") {
    Rng rng = make_stream(2, Stream::preference);
    const auto p = make_profile(4, 5, 1.1, rng);
    const auto sum = fap_popularity(p, one_fap_layout(4), 0, Aggregation::sum);
    CHECK(sum.total() == doctest::Approx(4.0));
  }
  SUBCASE("empty region") {
    Rng rng = make_stream(3, Stream::preference);
    const auto p = make_profile(2, 5, 1.1, rng);
    CHECK_THROWS_AS(fap_popularity(p, one_fap_layout(2), 1), EmptyRegionError);
  }
}

TEST_CASE("request sampling") {
  Rng rng = make_stream(11, Stream::request);
  PopularityVector degenerate{{1.0, 0.0, 0.0}};
  PopularityVector single{{1.0}};
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample_request(degenerate, rng) == 1);
    CHECK(sample_request(single, rng) == 1);
  }
  PopularityVector uniform{{0.25, 0.25, 0.25, 0.25}};
  std::array<int, 5> counts{};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[sample_request(uniform, rng)];
  CHECK(counts[0] == 0);
  for (int f = 1; f <= 4; ++f) CHECK(counts[f] / double(draws) == doctest::Approx(0.25).epsilon(0.04));
  // Chi-square with 3 degrees of freedom; 16.27 is the 0.001 critical value.
  double chi2 = 0.0;
  for (int f = 1; f <= 4; ++f) chi2 += std::pow(counts[f] - draws / 4.0, 2) / (draws / 4.0);
  CHECK(chi2 < 16.27);
}

TEST_CASE("preference dynamics") {
  Rng rng = make_stream(4, Stream::preference);
  const auto p = make_profile(5, 10, 1.1, rng);
  SUBCASE("consistent keeps the profile") {
    auto q = p;
    for (int t = 0; t < 20; ++t) q = advance_preferences(q, true, rng);
    CHECK(q.rank == p.rank);
  }
  SUBCASE("inconsistent redraws valid permutations") {
    const auto q = advance_preferences(p, false, rng);
    CHECK(q.rank != p.rank);
    for (const auto& r : q.rank) CHECK(is_permutation_of_ranks(r));
  }
  SUBCASE("redrawn permutations of three files are uniform") {
    auto q = make_profile(1, 3, 1.1, rng);
    std::map<std::vector<std::uint32_t>, int> seen;
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
      q = advance_preferences(q, false, rng);
      ++seen[q.rank[0]];
    }
    CHECK(seen.size() == 6);
    for (const auto& [perm, count] : seen) {
      CHECK(std::abs(count / double(draws) - 1.0 / 6.0) < 0.01);
    }
  }
}
