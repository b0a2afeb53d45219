#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fogcache/config.hpp"
#include "fogcache/neural.hpp"
#include "fogcache/popularity.hpp"
#include "fogcache/rng.hpp"

namespace fogcache {

/// Cache slots q_n (0 = empty) plus the file requested this slot.
struct AgentState {
  std::vector<FileId> cached;
  FileId requested = 0;

  std::size_t capacity() const { return cached.size(); }
  bool holds(FileId f) const;
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// 0 keeps the cache; s in 1..S overwrites slot s with the requested file.
struct ActionId {
  std::size_t value = 0;
  friend auto operator<=>(const ActionId&, const ActionId&) = default;
};

struct Transition {
  AgentState state;
  ActionId action;
  double reward = 0.0;
  AgentState next_state;
  double neighbor_count = 0.0;
};

/// Fixed-capacity experience ring; the oldest record is overwritten first.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return records_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// i-th record counted from the oldest.
  const Transition& operator[](std::size_t i) const;
  /// `count` distinct positions, uniform without replacement.
  std::vector<std::size_t> sample_indices(std::size_t count, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // oldest record once full
  std::vector<Transition> records_;
};

/// scaled: length S+1, every slot id and the requested id times 1/F.
/// onehot: length 2F, x[f-1] = 1 for cached f, x[F+r-1] = 1 for request r.
std::vector<double> encode_state(const AgentState& state, std::size_t library_size,
                                 StateEncoding encoding = StateEncoding::scaled);

/// Network input length for capacity S and library size F.
std::size_t encoded_size(std::size_t capacity, std::size_t library_size, StateEncoding encoding);

/// sum_f P_f exp(-lambda (d_f - z1_f) / time_unit). Throws ConfigError unless
/// 0 < lambda <= 1.
double local_reward(std::span<const double> popularity, std::span<const double> delays,
                    std::span<const double> z1, double lambda, double time_unit = 1.0);

/// Allowed actions (size S+1). Replacement is only allowed when the requested
/// file is not cached already; action 0 is always allowed.
std::vector<std::uint8_t> action_mask(const AgentState& state);

/// Throws DuplicateCacheError for a replacement when the requested file is
/// already cached, DomainError for an action above S.
AgentState apply_action(const AgentState& state, ActionId action);

/// Argmax over allowed entries; ties go to the lowest index.
ActionId greedy_action(const Eigen::VectorXd& q, std::span<const std::uint8_t> mask);

struct AgentOptions {
  double gamma = 0.9;
  std::size_t sync_interval = 100;
  SyncMode sync_mode = SyncMode::steps;
  std::size_t replay_capacity = 10000;
  double epsilon = 1.0;
  StateEncoding encoding = StateEncoding::scaled;
};

struct LearnReport {
  bool skipped = false;  // memory held fewer records than the batch
  bool synced = false;
  std::size_t trained = 0;
  std::size_t rejected = 0;  // records with a non-finite target
  double mean_loss = 0.0;
};

/// One F-AP's learner: current and target Q-networks, replay memory and the
/// delayed-update clock.
class DdqnAgent {
 public:
  using TargetRule = std::function<double(const DdqnAgent&, const Transition&)>;

  DdqnAgent(Mlp net, std::size_t library_size, AgentOptions options);

  /// epsilon-greedy over allowed actions.
  ActionId select_action(const AgentState& state, Rng& rng) const;

  Eigen::VectorXd q_values(const AgentState& state) const;
  Eigen::VectorXd target_q_values(const AgentState& state) const;

  void remember(Transition t) { memory_.push(std::move(t)); }

  /// Samples `batch_size` records, computes every target with `rule` from the
  /// pre-batch networks, then takes one optimizer step per record. In step-sync mode
  /// the target network is refreshed whenever the learn counter hits a
  /// multiple of the sync interval.
  LearnReport learn_batch(std::size_t batch_size, Rng& rng, const TargetRule& rule);

  /// Slot-clock hook: refreshes the target every `sync_interval` slots in
  /// slot-sync mode.
  bool end_slot(std::size_t t);

  void sync_target() { target_ = fogcache::sync_target(current_); }

  Mlp& current_net() { return current_; }
  const Mlp& current_net() const { return current_; }
  Mlp& target_net() { return target_; }
  const Mlp& target_net() const { return target_; }
  const ReplayMemory& memory() const { return memory_; }
  std::vector<double> encode(const AgentState& s) const {
    return encode_state(s, library_size_, options_.encoding);
  }
  double epsilon() const { return options_.epsilon; }
  void set_epsilon(double e) { options_.epsilon = e; }
  double gamma() const { return options_.gamma; }
  std::size_t library_size() const { return library_size_; }
  std::size_t learn_steps() const { return learn_steps_; }

 private:
  Mlp current_;
  Mlp target_;
  ReplayMemory memory_;
  std::size_t library_size_;
  AgentOptions options_;
  std::size_t learn_steps_ = 0;
};

/// r + gamma * Qhat(s', a'), a' = argmax_a Q(s', a) over allowed actions.
double ddqn_target(const DdqnAgent& agent, const Transition& transition);

/// Layer sizes S+1, hidden..., S+1.
std::vector<std::size_t> network_layers(const SimConfig& cfg);

/// Linear anneal from start to end over `fraction` of the horizon, then flat.
double epsilon_at(const SimConfig& cfg, std::size_t t);

}  // namespace fogcache
