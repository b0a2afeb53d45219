#include <benchmark/benchmark.h>

#include <omp.h>

#include "fogcache/environment.hpp"
#include "fogcache/kernels.hpp"
#include "fogcache/rng.hpp"

namespace {

using namespace fogcache;

struct Scenario {
  SimConfig cfg;
  Topology topology;
  RadioParams radio;
  Environment env;
  CacheMatrix cache;

  Scenario(std::size_t n, std::size_t f)
      : cfg(make_cfg(n, f)),
        topology(build_topology(cfg)),
        radio(radio_params(cfg)),
        env(cfg, topology),
        cache(n, f, cfg.cache_capacity) {
    Rng rng = make_stream(7, Stream::init, 0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < cfg.cache_capacity; ++s) {
        const auto file = static_cast<FileId>(1 + uniform_index(rng, f));
        if (!cache.cached(k, file)) cache.replace(k, s, file);
      }
    }
  }

  static SimConfig make_cfg(std::size_t n, std::size_t f) {
    SimConfig c;
    c.n_faps = n;
    c.library_size = f;
    c.cache_capacity = f / 10;
    c.users_per_fap = 10;
    return c;
  }

  SlotInputs inputs() const {
    return {cache, topology, radio, env.current().popularity, env.current().z1,
            cfg.lambda, cfg.reward_time_unit};
  }
};

void BM_EvaluateSerial(benchmark::State& state) {
  Scenario sc(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto in = sc.inputs();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_slot_serial(in).objective);
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

void BM_EvaluateParallel(benchmark::State& state) {
  Scenario sc(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto in = sc.inputs();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_slot(in).objective);
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Args({3, 50})->Args({16, 1000})->Args({64, 2000});
BENCHMARK(BM_EvaluateParallel)->Args({3, 50})->Args({16, 1000})->Args({64, 2000});

BENCHMARK_MAIN();
