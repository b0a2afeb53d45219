#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "fogcache/agent.hpp"
#include "fogcache/config.hpp"
#include "fogcache/environment.hpp"
#include "fogcache/kernels.hpp"
#include "fogcache/radio.hpp"
#include "fogcache/topology.hpp"

namespace fogcache {

/// Read-only view of one slot handed to every scheme.
struct SlotContext {
  std::size_t t;
  const SlotRealization& now;
  const SlotRealization& next;
  const Topology& topology;
  const RadioParams& radio;
  const SimConfig& cfg;
};

/// Scores `cache` against the slot's popularity, Z1 table and reward settings.
SlotEvaluation evaluate(const CacheMatrix& cache, const SlotContext& ctx);

/// A caching policy running one agent per F-AP over a shared joint cache.
class CachingScheme {
 public:
  virtual ~CachingScheme() = default;
  virtual Scheme kind() const = 0;
  /// Serves every F-AP's request for slot ctx.t in ascending F-AP order.
  virtual void step(const SlotContext& ctx) = 0;
  virtual const CacheMatrix& cache() const = 0;
};

std::unique_ptr<CachingScheme> make_scheme(Scheme kind, const SimConfig& cfg,
                                           const Topology& topology);

/// Per-agent stream index so that schemes never share random streams.
inline std::uint64_t agent_stream_index(Scheme kind, std::size_t fap) {
  return (static_cast<std::uint64_t>(kind) + 1) * 1000003ull + fap;
}

/// Freshly initialized learner for `fap` of scheme `kind`, seeded from the
/// run seed so that two runs with one seed start from identical weights.
DdqnAgent make_agent(const SimConfig& cfg, Scheme kind, std::size_t fap);

}  // namespace fogcache
