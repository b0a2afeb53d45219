#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fogcache/agent.hpp"
#include "fogcache/scheme.hpp"

namespace fogcache {

/// Recency-ordered cache contents, most recent first.
struct LruState {
  std::size_t capacity = 0;
  std::vector<FileId> entries;
};

/// Hit: move to front. Miss: insert at front, evicting the least recent entry
/// when full.
LruState lru_access(LruState state, FileId file);

/// Tabular action values keyed by (sorted cached ids, requested id). Missing
/// entries read as zero.
class TabularQ {
 public:
  TabularQ(double alpha, double gamma, std::size_t n_actions, std::size_t table_cap);

  double value(const AgentState& s, ActionId a) const;
  /// All S+1 action values for `s`.
  std::vector<double> values(const AgentState& s) const;
  std::size_t size() const { return table_.size(); }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

  /// Q(s,a) += alpha (r + gamma max_a' Q(s',a') - Q(s,a)), the max taken over
  /// actions allowed at s'. Throws CapacityError when a new state would exceed
  /// the table cap.
  void update(const AgentState& s, ActionId a, double reward, const AgentState& s_next);

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<FileId>& k) const;
  };
  static std::vector<FileId> key(const AgentState& s);

  double alpha_;
  double gamma_;
  std::size_t n_actions_;
  std::size_t cap_;
  std::unordered_map<std::vector<FileId>, std::vector<double>, KeyHash> table_;
};

/// Free-function form of TabularQ::update.
void iql_update(TabularQ& q, const AgentState& s, ActionId a, double reward,
                const AgentState& s_next);

/// r + gamma max_a Qhat(s', a): max on the target network, allowed actions only.
double independent_dqn_target(const DdqnAgent& agent, const Transition& transition);

class LruScheme final : public CachingScheme {
 public:
  LruScheme(const SimConfig& cfg, const Topology& topology);
  Scheme kind() const override { return Scheme::lru; }
  void step(const SlotContext& ctx) override;
  const CacheMatrix& cache() const override { return cache_; }

 private:
  CacheMatrix cache_;
  std::vector<LruState> lru_;
};

/// Independent tabular Q-learning with local rewards. Cache rows are kept
/// sorted (empty slots last) so slot positions line up with the table key.
class IqlScheme final : public CachingScheme {
 public:
  IqlScheme(const SimConfig& cfg, const Topology& topology);
  Scheme kind() const override { return Scheme::iql; }
  void step(const SlotContext& ctx) override;
  const CacheMatrix& cache() const override { return cache_; }
  const TabularQ& table(std::size_t n) const { return tables_[n]; }

 private:
  const SimConfig& cfg_;
  CacheMatrix cache_;
  std::vector<TabularQ> tables_;
  std::vector<Rng> explore_;
};

/// Independent DQN agents: local reward, max target, own replay only.
class DqnScheme final : public CachingScheme {
 public:
  DqnScheme(const SimConfig& cfg, const Topology& topology);
  Scheme kind() const override { return Scheme::dqn; }
  void step(const SlotContext& ctx) override;
  const CacheMatrix& cache() const override { return cache_; }
  const DdqnAgent& agent(std::size_t n) const { return agents_[n]; }

 private:
  const SimConfig& cfg_;
  CacheMatrix cache_;
  std::vector<DdqnAgent> agents_;
  std::vector<Rng> explore_;
  std::vector<Rng> replay_;
};

}  // namespace fogcache
