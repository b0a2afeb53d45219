#include "fogcache/baselines.hpp"

#include <algorithm>
#include <string>

#include "fogcache/errors.hpp"

namespace fogcache {

LruState lru_access(LruState state, FileId file) {
  auto& e = state.entries;
  const auto it = std::find(e.begin(), e.end(), file);
  if (it != e.end()) {
    std::rotate(e.begin(), it, it + 1);
    return state;
  }
  if (e.size() >= state.capacity && !e.empty()) e.pop_back();
  if (state.capacity > 0) e.insert(e.begin(), file);
  return state;
}

TabularQ::TabularQ(double alpha, double gamma, std::size_t n_actions, std::size_t table_cap)
    : alpha_(alpha), gamma_(gamma), n_actions_(n_actions), cap_(table_cap) {}

std::size_t TabularQ::KeyHash::operator()(const std::vector<FileId>& k) const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (auto v : k) h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::vector<FileId> TabularQ::key(const AgentState& s) {
  std::vector<FileId> k;
  k.reserve(s.cached.size() + 1);
  for (auto f : s.cached) {
    if (f != 0) k.push_back(f);
  }
  std::sort(k.begin(), k.end());
  k.resize(s.cached.size(), 0);
  k.push_back(s.requested);
  return k;
}

double TabularQ::value(const AgentState& s, ActionId a) const {
  const auto it = table_.find(key(s));
  return it == table_.end() ? 0.0 : it->second.at(a.value);
}

std::vector<double> TabularQ::values(const AgentState& s) const {
  const auto it = table_.find(key(s));
  return it == table_.end() ? std::vector<double>(n_actions_, 0.0) : it->second;
}

void TabularQ::update(const AgentState& s, ActionId a, double reward, const AgentState& s_next) {
  const auto next_q = values(s_next);
  const auto mask = action_mask(s_next);
  double best = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < next_q.size(); ++i) {
    if (mask[i] && (!found || next_q[i] > best)) {
      best = next_q[i];
      found = true;
    }
  }
  auto k = key(s);
  auto it = table_.find(k);
  if (it == table_.end()) {
    if (table_.size() >= cap_) {
      throw CapacityError("IQL table exceeded " + std::to_string(cap_) +
                          " states; shrink library_size or cache_capacity, or raise "
                          "iql_table_cap");
    }
    it = table_.emplace(std::move(k), std::vector<double>(n_actions_, 0.0)).first;
  }
  double& q = it->second.at(a.value);
  q += alpha_ * (reward + gamma_ * best - q);
}

void iql_update(TabularQ& q, const AgentState& s, ActionId a, double reward,
                const AgentState& s_next) {
  q.update(s, a, reward, s_next);
}

double independent_dqn_target(const DdqnAgent& agent, const Transition& tr) {
  if (agent.gamma() == 0.0) return tr.reward;
  const auto q = agent.target_q_values(tr.next_state);
  const auto mask = action_mask(tr.next_state);
  return tr.reward + agent.gamma() * q(static_cast<Eigen::Index>(greedy_action(q, mask).value));
}

LruScheme::LruScheme(const SimConfig& cfg, const Topology& topology)
    : cache_(topology.n_faps(), cfg.library_size, cfg.cache_capacity),
      lru_(topology.n_faps(), LruState{cfg.cache_capacity, {}}) {}

void LruScheme::step(const SlotContext& ctx) {
  for (std::size_t n = 0; n < lru_.size(); ++n) {
    lru_[n] = lru_access(std::move(lru_[n]), ctx.now.requests[n]);
    cache_.assign(n, lru_[n].entries);
  }
}

namespace {

std::vector<FileId> sorted_row(std::span<const FileId> slots) {
  std::vector<FileId> row;
  for (auto f : slots) {
    if (f != 0) row.push_back(f);
  }
  std::sort(row.begin(), row.end());
  return row;
}

}  // namespace

IqlScheme::IqlScheme(const SimConfig& cfg, const Topology& topology)
    : cfg_(cfg), cache_(topology.n_faps(), cfg.library_size, cfg.cache_capacity) {
  for (std::size_t n = 0; n < topology.n_faps(); ++n) {
    tables_.emplace_back(cfg.iql_alpha, cfg.gamma, cfg.cache_capacity + 1, cfg.iql_table_cap);
    explore_.push_back(make_stream(cfg.seed, Stream::exploration, agent_stream_index(kind(), n)));
  }
}

void IqlScheme::step(const SlotContext& ctx) {
  const double eps = epsilon_at(cfg_, ctx.t);
  for (std::size_t n = 0; n < tables_.size(); ++n) {
    const auto slots = cache_.slots(n);
    AgentState state{{slots.begin(), slots.end()}, ctx.now.requests[n]};
    const auto mask = action_mask(state);

    ActionId action;
    if (uniform01(explore_[n]) < eps) {
      std::vector<std::size_t> allowed;
      for (std::size_t a = 0; a < mask.size(); ++a) {
        if (mask[a]) allowed.push_back(a);
      }
      action = ActionId{allowed[uniform_index(explore_[n], allowed.size())]};
    } else {
      const auto q = tables_[n].values(state);
      action = greedy_action(Eigen::Map<const Eigen::VectorXd>(
                                 q.data(), static_cast<Eigen::Index>(q.size())),
                             mask);
    }
    if (action.value != 0) {
      cache_.replace(n, action.value - 1, state.requested);
      cache_.assign(n, sorted_row(cache_.slots(n)));
    }
    const double reward = evaluate(cache_, ctx).reward[n];
    const auto after = cache_.slots(n);
    const AgentState next{{after.begin(), after.end()}, ctx.next.requests[n]};
    tables_[n].update(state, action, reward, next);
  }
}

DqnScheme::DqnScheme(const SimConfig& cfg, const Topology& topology)
    : cfg_(cfg), cache_(topology.n_faps(), cfg.library_size, cfg.cache_capacity) {
  for (std::size_t n = 0; n < topology.n_faps(); ++n) {
    agents_.push_back(make_agent(cfg, Scheme::dqn, n));
    explore_.push_back(make_stream(cfg.seed, Stream::exploration, agent_stream_index(kind(), n)));
    replay_.push_back(make_stream(cfg.seed, Stream::replay, agent_stream_index(kind(), n)));
  }
}

void DqnScheme::step(const SlotContext& ctx) {
  const double eps = epsilon_at(cfg_, ctx.t);
  for (std::size_t n = 0; n < agents_.size(); ++n) {
    auto& agent = agents_[n];
    agent.set_epsilon(eps);
    const auto slots = cache_.slots(n);
    AgentState state{{slots.begin(), slots.end()}, ctx.now.requests[n]};
    const auto action = agent.select_action(state, explore_[n]);
    if (action.value != 0) cache_.replace(n, action.value - 1, state.requested);

    const double reward = evaluate(cache_, ctx).reward[n];
    const auto after = cache_.slots(n);
    AgentState next{{after.begin(), after.end()}, ctx.next.requests[n]};
    agent.remember({std::move(state), action, reward, std::move(next), 0.0});
    agent.learn_batch(cfg_.batch_size, replay_[n], independent_dqn_target);
  }
  for (auto& agent : agents_) agent.end_slot(ctx.t);
}

}  // namespace fogcache
