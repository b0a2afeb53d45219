#include "fogcache/environment.hpp"

#include <cmath>

namespace fogcache {

Grid expected_user_delay(const PreferenceProfile& profile, const UserLayout& layout,
                         std::span<const double> gains, const RadioParams& radio,
                         std::size_t n_faps) {
  const auto files = profile.library_size;
  Grid weighted(n_faps, files);
  Grid mass(n_faps, files);
  for (std::size_t u = 0; u < layout.n_users(); ++u) {
    const auto n = layout.serving[u];
    double rate = wireless_rate(radio, gains[u], layout.distances[u]);
    if (!(rate > radio.rate_floor)) rate = radio.rate_floor;
    const double z1 = delay_fap_to_user(radio, rate);
    const auto p = preference_vector(profile, u);
    for (std::size_t f = 0; f < files; ++f) {
      weighted(n, f) += p[f] * z1;
      mass(n, f) += p[f];
    }
  }
  for (std::size_t i = 0; i < weighted.values.size(); ++i) {
    weighted.values[i] = mass.values[i] > 0.0 ? weighted.values[i] / mass.values[i] : 0.0;
  }
  return weighted;
}

Environment::Environment(const SimConfig& cfg, const Topology& topology)
    : cfg_(cfg),
      topology_(topology),
      radio_(radio_params(cfg)),
      placement_(make_stream(cfg.seed, Stream::placement)),
      channel_(make_stream(cfg.seed, Stream::channel)),
      preference_(make_stream(cfg.seed, Stream::preference)) {
  for (std::size_t n = 0; n < topology.n_faps(); ++n) {
    request_.push_back(make_stream(cfg.seed, Stream::request, n));
  }
  layout_ = place_users(topology_, cfg_.users_per_fap, placement_);
  profile_ = make_profile(layout_.n_users(), cfg_.library_size, cfg_.tau, preference_);
  current_ = generate(1);
  upcoming_ = generate(2);
}

void Environment::advance() {
  current_ = std::move(upcoming_);
  upcoming_ = generate(current_.t + 1);
}

void Environment::mix(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    hash_ ^= p[i];
    hash_ *= 0x100000001b3ull;
  }
}

SlotRealization Environment::generate(std::size_t t) {
  if (t > 1) {
    if (cfg_.mobility) layout_ = place_users(topology_, cfg_.users_per_fap, placement_);
    profile_ = advance_preferences(profile_, cfg_.consistent_preference, preference_);
  }
  SlotRealization slot;
  slot.t = t;
  slot.layout = layout_;
  slot.gains.resize(layout_.n_users());
  for (auto& g : slot.gains) g = -std::log1p(-uniform01(channel_));  // Exp(1)

  const auto n_faps = topology_.n_faps();
  slot.popularity.reserve(n_faps);
  for (std::size_t n = 0; n < n_faps; ++n) {
    slot.popularity.push_back(fap_popularity(profile_, layout_, n, cfg_.popularity_aggregation));
  }
  slot.z1 = expected_user_delay(profile_, layout_, slot.gains, radio_, n_faps);
  slot.requests.resize(n_faps);
  for (std::size_t n = 0; n < n_faps; ++n) {
    slot.requests[n] = sample_request(slot.popularity[n], request_[n]);
  }

  mix(slot.gains.data(), slot.gains.size() * sizeof(double));
  mix(slot.layout.distances.data(), slot.layout.distances.size() * sizeof(double));
  mix(slot.requests.data(), slot.requests.size() * sizeof(FileId));
  for (const auto& p : slot.popularity) mix(p.probs.data(), p.probs.size() * sizeof(double));
  return slot;
}

}  // namespace fogcache
