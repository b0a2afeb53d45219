#include "fogcache/agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fogcache/errors.hpp"

namespace fogcache {

bool AgentState::holds(FileId f) const {
  return f != 0 && std::find(cached.begin(), cached.end(), f) != cached.end();
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("replay_capacity: must be >= 1");
  records_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayMemory::push(Transition t) {
  if (records_.size() < capacity_) {
    records_.push_back(std::move(t));
    return;
  }
  records_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayMemory::operator[](std::size_t i) const {
  return records_[(head_ + i) % records_.size()];
}

std::vector<std::size_t> ReplayMemory::sample_indices(std::size_t count, Rng& rng) const {
  // Floyd's algorithm: distinct picks in O(count) draws.
  const auto n = records_.size();
  std::vector<std::size_t> picks;
  picks.reserve(count);
  for (std::size_t j = n - count; j < n; ++j) {
    const auto r = uniform_index(rng, j + 1);
    if (std::find(picks.begin(), picks.end(), r) == picks.end()) {
      picks.push_back(r);
    } else {
      picks.push_back(j);
    }
  }
  return picks;
}

std::size_t encoded_size(std::size_t capacity, std::size_t library_size, StateEncoding encoding) {
  return encoding == StateEncoding::onehot ? 2 * library_size : capacity + 1;
}

std::vector<double> encode_state(const AgentState& state, std::size_t library_size,
                                 StateEncoding encoding) {
  if (encoding == StateEncoding::onehot) {
    std::vector<double> v(2 * library_size, 0.0);
    for (auto f : state.cached) {
      if (f != 0) v[f - 1] = 1.0;
    }
    v[library_size + state.requested - 1] = 1.0;
    return v;
  }
  const double scale = 1.0 / static_cast<double>(library_size);
  std::vector<double> v;
  v.reserve(state.cached.size() + 1);
  for (auto f : state.cached) v.push_back(static_cast<double>(f) * scale);
  v.push_back(static_cast<double>(state.requested) * scale);
  return v;
}

double local_reward(std::span<const double> popularity, std::span<const double> delays,
                    std::span<const double> z1, double lambda, double time_unit) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda: must lie in (0, 1]");
  double r = 0.0;
  for (std::size_t f = 0; f < popularity.size(); ++f) {
    r += popularity[f] * std::exp(-lambda * (delays[f] - z1[f]) / time_unit);
  }
  return r;
}

std::vector<std::uint8_t> action_mask(const AgentState& state) {
  const bool replace_ok = !state.holds(state.requested);
  std::vector<std::uint8_t> mask(state.capacity() + 1, replace_ok);
  mask[0] = 1;
  return mask;
}

AgentState apply_action(const AgentState& state, ActionId action) {
  if (action.value > state.capacity()) {
    throw DomainError("apply_action: action " + std::to_string(action.value) + " exceeds S=" +
                      std::to_string(state.capacity()));
  }
  if (action.value == 0) return state;
  if (state.holds(state.requested)) {
    throw DuplicateCacheError("apply_action: file " + std::to_string(state.requested) +
                              " is already cached");
  }
  AgentState next = state;
  next.cached[action.value - 1] = state.requested;
  return next;
}

ActionId greedy_action(const Eigen::VectorXd& q, std::span<const std::uint8_t> mask) {
  std::size_t best = 0;
  bool found = false;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (!mask[a]) continue;
    if (!found || q(static_cast<Eigen::Index>(a)) > q(static_cast<Eigen::Index>(best))) {
      best = a;
      found = true;
    }
  }
  return ActionId{best};
}

DdqnAgent::DdqnAgent(Mlp net, std::size_t library_size, AgentOptions options)
    : current_(std::move(net)),
      target_(current_),
      memory_(options.replay_capacity),
      library_size_(library_size),
      options_(options) {
  if (options_.sync_interval == 0) throw ConfigError("nu: must be >= 1");
}

Eigen::VectorXd DdqnAgent::q_values(const AgentState& state) const {
  return current_.forward(encode(state));
}

Eigen::VectorXd DdqnAgent::target_q_values(const AgentState& state) const {
  return target_.forward(encode(state));
}

ActionId DdqnAgent::select_action(const AgentState& state, Rng& rng) const {
  const auto mask = action_mask(state);
  if (uniform01(rng) < options_.epsilon) {
    std::vector<std::size_t> allowed;
    for (std::size_t a = 0; a < mask.size(); ++a) {
      if (mask[a]) allowed.push_back(a);
    }
    return ActionId{allowed[uniform_index(rng, allowed.size())]};
  }
  return greedy_action(q_values(state), mask);
}

LearnReport DdqnAgent::learn_batch(std::size_t batch_size, Rng& rng, const TargetRule& rule) {
  LearnReport report;
  if (batch_size == 0 || memory_.size() < batch_size) {
    report.skipped = true;
    return report;
  }
  const auto picks = memory_.sample_indices(batch_size, rng);
  std::vector<double> targets(picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i) targets[i] = rule(*this, memory_[picks[i]]);

  if (current_.optimizer() == Optimizer::adam) {
    std::vector<std::vector<double>> inputs;
    std::vector<std::size_t> actions;
    std::vector<double> kept;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      if (!std::isfinite(targets[i])) {
        ++report.rejected;
        continue;
      }
      const auto& tr = memory_[picks[i]];
      inputs.push_back(encode(tr.state));
      actions.push_back(tr.action.value);
      kept.push_back(targets[i]);
    }
    report.trained = kept.size();
    if (!kept.empty()) report.mean_loss = current_.train_batch(inputs, actions, kept);
  } else {
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      if (!std::isfinite(targets[i])) {
        ++report.rejected;
        continue;
      }
      const auto& tr = memory_[picks[i]];
      loss_sum += current_.train_step(encode(tr.state), tr.action.value, targets[i]);
      ++report.trained;
    }
    report.mean_loss = report.trained ? loss_sum / static_cast<double>(report.trained) : 0.0;
  }

  ++learn_steps_;
  if (options_.sync_mode == SyncMode::steps && learn_steps_ % options_.sync_interval == 0) {
    sync_target();
    report.synced = true;
  }
  return report;
}

bool DdqnAgent::end_slot(std::size_t t) {
  if (options_.sync_mode == SyncMode::slots && t % options_.sync_interval == 0) {
    sync_target();
    return true;
  }
  return false;
}

double ddqn_target(const DdqnAgent& agent, const Transition& tr) {
  if (agent.gamma() == 0.0) return tr.reward;
  const auto next_action = greedy_action(agent.q_values(tr.next_state), action_mask(tr.next_state));
  const auto target_q = agent.target_q_values(tr.next_state);
  return tr.reward + agent.gamma() * target_q(static_cast<Eigen::Index>(next_action.value));
}

std::vector<std::size_t> network_layers(const SimConfig& cfg) {
  std::vector<std::size_t> sizes{
      encoded_size(cfg.cache_capacity, cfg.library_size, cfg.state_encoding)};
  sizes.insert(sizes.end(), cfg.hidden_layers.begin(), cfg.hidden_layers.end());
  sizes.push_back(cfg.cache_capacity + 1);
  return sizes;
}

double epsilon_at(const SimConfig& cfg, std::size_t t) {
  const double span = cfg.epsilon_decay_fraction * static_cast<double>(cfg.horizon);
  if (span <= 0.0) return cfg.epsilon_end;
  const double progress = std::min(1.0, static_cast<double>(t - 1) / span);
  return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * progress;
}

}  // namespace fogcache
