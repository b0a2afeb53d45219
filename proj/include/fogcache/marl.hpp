#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fogcache/agent.hpp"
#include "fogcache/scheme.hpp"

namespace fogcache {

/// C_{n,f}: how many times F-AP n has cached file f, reset when f is evicted.
class CacheCounters {
 public:
  CacheCounters(std::size_t n_faps, std::size_t library_size);

  std::uint64_t at(std::size_t fap, FileId file) const {
    return counts_[fap * library_size_ + (file - 1)];
  }
  std::uint64_t& at(std::size_t fap, FileId file) {
    return counts_[fap * library_size_ + (file - 1)];
  }
  std::size_t n_faps() const { return n_faps_; }
  std::size_t library_size() const { return library_size_; }

 private:
  std::size_t n_faps_;
  std::size_t library_size_;
  std::vector<std::uint64_t> counts_;
};

/// Action 0 leaves the counters alone. Otherwise the requested file's counter
/// increments and the counter of the file evicted from the chosen slot (if
/// any) resets to zero. `before` is the state prior to the action.
void update_counters(CacheCounters& counters, std::size_t fap, const AgentState& before,
                     ActionId action);

/// C_{-n,f}: mean (or sum) over neighbors of C_{m,f}, divided by t. Zero for
/// an isolated F-AP. Throws DomainError for t = 0.
double neighbor_observation(const CacheCounters& counters, const Topology& topology,
                            std::size_t fap, FileId file, std::size_t t,
                            Aggregation aggregation = Aggregation::mean);

struct GlobalRewardSample {
  double value = 0.0;
  std::vector<double> per_agent;
};

/// R = sum_n r_n, keeping the addends.
GlobalRewardSample global_reward(std::span<const double> local_rewards);

/// (R + gamma * Qhat(s*, a')) / (C_{-n,f} + 1), a' = argmax_a Q(s', a) from
/// the current network; s* is s' or s depending on `state`.
double marl_target(const DdqnAgent& agent, const Transition& transition,
                   TargetState state = TargetState::next);

/// Cooperative DDQN agents with caching-history exchange and joint learning.
class MarlScheme final : public CachingScheme {
 public:
  MarlScheme(const SimConfig& cfg, const Topology& topology);

  Scheme kind() const override { return Scheme::marl; }
  void step(const SlotContext& ctx) override;
  const CacheMatrix& cache() const override { return cache_; }

  /// step() followed by scoring the joint cache for the slot.
  SlotEvaluation run_slot(const SlotContext& ctx);

  const CacheCounters& counters() const { return counters_; }
  const DdqnAgent& agent(std::size_t n) const { return agents_[n]; }
  std::size_t skipped_learns() const { return skipped_learns_; }

 private:
  const SimConfig& cfg_;
  CacheMatrix cache_;
  CacheCounters counters_;
  std::vector<DdqnAgent> agents_;
  std::vector<Rng> explore_;
  std::vector<Rng> replay_;
  std::size_t skipped_learns_ = 0;
};

}  // namespace fogcache
