#include "fogcache/scheme.hpp"

#include "fogcache/baselines.hpp"
#include "fogcache/marl.hpp"

namespace fogcache {

SlotEvaluation evaluate(const CacheMatrix& cache, const SlotContext& ctx) {
  const SlotInputs in{cache,         ctx.topology,   ctx.radio,
                      ctx.now.popularity, ctx.now.z1, ctx.cfg.lambda,
                      ctx.cfg.reward_time_unit};
  return evaluate_slot(in);
}

DdqnAgent make_agent(const SimConfig& cfg, Scheme kind, std::size_t fap) {
  AgentOptions o;
  o.gamma = cfg.gamma;
  o.sync_interval = cfg.nu;
  o.sync_mode = cfg.sync_mode;
  o.replay_capacity = cfg.replay_capacity;
  o.epsilon = cfg.epsilon_start;
  o.encoding = cfg.state_encoding;
  Rng init = make_stream(cfg.seed, Stream::init, agent_stream_index(kind, fap));
  Mlp net(network_layers(cfg), cfg.alpha, init);
  net.set_grad_clip(cfg.grad_clip);
  net.set_optimizer(cfg.optimizer);
  return DdqnAgent(std::move(net), cfg.library_size, o);
}

std::unique_ptr<CachingScheme> make_scheme(Scheme kind, const SimConfig& cfg,
                                           const Topology& topology) {
  switch (kind) {
    case Scheme::marl:
      return std::make_unique<MarlScheme>(cfg, topology);
    case Scheme::dqn:
      return std::make_unique<DqnScheme>(cfg, topology);
    case Scheme::iql:
      return std::make_unique<IqlScheme>(cfg, topology);
    case Scheme::lru:
      break;
  }
  return std::make_unique<LruScheme>(cfg, topology);
}

}  // namespace fogcache
