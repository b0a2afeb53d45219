#include "fogcache/marl.hpp"

#include <algorithm>
#include <numeric>

#include "fogcache/errors.hpp"

namespace fogcache {

CacheCounters::CacheCounters(std::size_t n_faps, std::size_t library_size)
    : n_faps_(n_faps), library_size_(library_size), counts_(n_faps * library_size, 0) {}

void update_counters(CacheCounters& counters, std::size_t fap, const AgentState& before,
                     ActionId action) {
  if (action.value == 0) return;
  const FileId evicted = before.cached.at(action.value - 1);
  ++counters.at(fap, before.requested);
  if (evicted != 0 && evicted != before.requested) counters.at(fap, evicted) = 0;
}

double neighbor_observation(const CacheCounters& counters, const Topology& topology,
                            std::size_t fap, FileId file, std::size_t t,
                            Aggregation aggregation) {
  if (t == 0) throw DomainError("neighbor_observation: t must be >= 1");
  const auto nbrs = topology.neighbors(fap);
  if (nbrs.empty()) return 0.0;
  double sum = 0.0;
  for (auto m : nbrs) sum += static_cast<double>(counters.at(m, file));
  if (aggregation == Aggregation::mean) sum /= static_cast<double>(nbrs.size());
  return sum / static_cast<double>(t);
}

GlobalRewardSample global_reward(std::span<const double> local_rewards) {
  GlobalRewardSample out;
  out.per_agent.assign(local_rewards.begin(), local_rewards.end());
  out.value = std::accumulate(local_rewards.begin(), local_rewards.end(), 0.0);
  return out;
}

double marl_target(const DdqnAgent& agent, const Transition& tr, TargetState state) {
  double inner = tr.reward;
  if (agent.gamma() != 0.0) {
    const auto next_action =
        greedy_action(agent.q_values(tr.next_state), action_mask(tr.next_state));
    const auto& eval_state = state == TargetState::next ? tr.next_state : tr.state;
    inner += agent.gamma() *
             agent.target_q_values(eval_state)(static_cast<Eigen::Index>(next_action.value));
  }
  return inner / (tr.neighbor_count + 1.0);
}

MarlScheme::MarlScheme(const SimConfig& cfg, const Topology& topology)
    : cfg_(cfg),
      cache_(topology.n_faps(), cfg.library_size, cfg.cache_capacity),
      counters_(topology.n_faps(), cfg.library_size) {
  for (std::size_t n = 0; n < topology.n_faps(); ++n) {
    agents_.push_back(make_agent(cfg, Scheme::marl, n));
    explore_.push_back(make_stream(cfg.seed, Stream::exploration, agent_stream_index(kind(), n)));
    replay_.push_back(make_stream(cfg.seed, Stream::replay, agent_stream_index(kind(), n)));
  }
}

void MarlScheme::step(const SlotContext& ctx) {
  const auto t = ctx.t;
  const double eps = epsilon_at(cfg_, t);
  const auto rule = [state = cfg_.target_state](const DdqnAgent& a, const Transition& tr) {
    return marl_target(a, tr, state);
  };

  for (std::size_t n = 0; n < agents_.size(); ++n) {
    auto& agent = agents_[n];
    agent.set_epsilon(eps);
    const auto slots = cache_.slots(n);
    AgentState state{{slots.begin(), slots.end()}, ctx.now.requests[n]};

    const auto action = agent.select_action(state, explore_[n]);
    if (action.value != 0) {
      update_counters(counters_, n, state, action);
      cache_.replace(n, action.value - 1, state.requested);
    }
    const double observation = neighbor_observation(counters_, ctx.topology, n, state.requested,
                                                    t, cfg_.observation_aggregation);

    const auto eval = evaluate(cache_, ctx);
    const auto reward = global_reward(eval.reward);

    const auto after = cache_.slots(n);
    AgentState next{{after.begin(), after.end()}, ctx.next.requests[n]};
    agent.remember({std::move(state), action, reward.value, std::move(next), observation});

    // Joint learning over the F-AP and its neighbors, ascending.
    std::vector<std::size_t> learners(ctx.topology.neighbors(n).begin(),
                                      ctx.topology.neighbors(n).end());
    learners.insert(std::upper_bound(learners.begin(), learners.end(), n), n);
    for (auto m : learners) {
      if (agents_[m].learn_batch(cfg_.batch_size, replay_[m], rule).skipped) ++skipped_learns_;
    }
  }
  for (auto& agent : agents_) agent.end_slot(t);
}

SlotEvaluation MarlScheme::run_slot(const SlotContext& ctx) {
  step(ctx);
  return evaluate(cache_, ctx);
}

}  // namespace fogcache
