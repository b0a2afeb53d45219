// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fogcache/baselines.hpp"
#include "fogcache/errors.hpp"
#include "fogcache/harness.hpp"
#include "fogcache/marl.hpp"
#include "oracles.hpp"

using namespace fogcache;

namespace {

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d [%s] %s: %s\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<RunResult> per_seed(const SimConfig& base) {
  std::vector<SimConfig> configs;
  for (auto s : kSeeds) {
    auto c = base;
    c.seed = s;
    configs.push_back(c);
  }
  auto results = run_batch(configs);
  for (const auto& r : results) {
    if (!r.complete) throw std::runtime_error("run failed: " + r.error);
  }
  return results;
}

double ms(double seconds) { return 1e3 * seconds; }

void scheme_ordering() {
  SimConfig cfg;
  const auto runs = per_seed(cfg);
  int good = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const double marl = r.summary_for(Scheme::marl).tail_mean_delay;
    const double dqn = r.summary_for(Scheme::dqn).tail_mean_delay;
    const double iql = r.summary_for(Scheme::iql).tail_mean_delay;
    const double lru = r.summary_for(Scheme::lru).tail_mean_delay;
    const double best = std::min(dqn, iql);
    const bool ok = marl < best && best < lru && marl <= 0.95 * best;
    good += ok;
    std::printf("  seed %llu: tail ms marl %.4f dqn %.4f iql %.4f lru %.4f  gap %.2f%%%s\n",
                static_cast<unsigned long long>(kSeeds[i]), ms(marl), ms(dqn), ms(iql), ms(lru),
                100.0 * (best - marl) / best, ok ? "" : "  (miss)");
  }
  report(1, "scheme ordering", good >= 4, std::to_string(good) + "/5 seeds");
}

void capacity_monotonicity() {
  const std::vector<std::size_t> caps{2, 4, 8, 16};
  bool all = true;
  double worst = -1.0;
  for (auto s : kSeeds) {
    SimConfig cfg;
    cfg.seed = s;
    const auto rows = sweep_capacity(cfg, caps);
    for (auto scheme : cfg.schemes) {
      std::vector<double> tail;
      for (const auto& r : rows)
        if (r.scheme == scheme) tail.push_back(r.tail_mean_delay);
      std::printf("  seed %llu %s:", static_cast<unsigned long long>(s),
                  std::string(to_string(scheme)).c_str());
      for (double v : tail) std::printf(" %.4f", ms(v));
      std::printf("\n");
      for (std::size_t k = 1; k < tail.size(); ++k) {
        const double rise = (tail[k] - tail[k - 1]) / tail[k - 1];
        worst = std::max(worst, rise);
        if (rise > 0.01) all = false;
      }
    }
  }
  report(2, "capacity monotonicity", all, fmt("largest step increase %.3f%%", 100.0 * worst));
}

void paired_marl(int id, const char* name, const std::function<void(SimConfig&)>& better,
                 const std::function<void(SimConfig&)>& worse, bool strict) {
  SimConfig a;
  a.schemes = {Scheme::marl};
  SimConfig b = a;
  better(a);
  worse(b);
  const auto ra = per_seed(a);
  const auto rb = per_seed(b);
  int good = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double x = ra[i].summary_for(Scheme::marl).tail_mean_delay;
    const double y = rb[i].summary_for(Scheme::marl).tail_mean_delay;
    const bool ok = strict ? x < y : x <= y;
    good += ok;
    std::printf("  seed %llu: %.4f vs %.4f ms\n", static_cast<unsigned long long>(kSeeds[i]),
                ms(x), ms(y));
  }
  report(id, name, good >= 4, std::to_string(good) + "/5 seeds");
}

void objective_oracle() {
  Rng rng = make_stream(2024, Stream::init);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto in = oracle::random_instance(rng, 3, 8);
    std::vector<std::vector<std::uint8_t>> y(in.n, std::vector<std::uint8_t>(in.n));
    std::vector<Point> pos;
    for (std::size_t a = 0; a < in.n; ++a) {
      pos.push_back({200.0 * static_cast<double>(a), 0.0});
      for (std::size_t b = 0; b < in.n; ++b) y[a][b] = static_cast<std::uint8_t>(in.y[a][b]);
    }
    const Topology topo(y, pos, 100.0);
    CacheMatrix cache(in.n, in.f, in.s);
    std::vector<PopularityVector> pop;
    Grid z1(in.n, in.f);
    for (std::size_t a = 0; a < in.n; ++a) {
      std::vector<FileId> row;
      for (std::size_t f = 0; f < in.f; ++f) {
        if (in.x[a][f]) row.push_back(static_cast<FileId>(f + 1));
        z1(a, f) = in.z1[a][f];
      }
      cache.assign(a, row);
      pop.push_back({in.p[a]});
    }
    RadioParams radio;
    radio.file_size = in.q;
    radio.inter_fap_rate = in.r_nm;
    radio.backhaul_rate = in.r_back;
    const double expected = oracle::brute_force_delay(in);
    const double got = average_delay(cache, topo, pop, z1, radio);
    worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
  }
  report(5, "objective oracle", worst <= 1e-12, fmt("max relative error %.3g", worst));
}

void gradient_check() {
  Rng rng = make_stream(3, Stream::init);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> sizes{1 + uniform_index(rng, 6)};
    const std::size_t hidden = uniform_index(rng, 3);
    for (std::size_t h = 0; h < hidden; ++h) sizes.push_back(1 + uniform_index(rng, 16));
    sizes.push_back(1 + uniform_index(rng, 5));
    const Mlp net(sizes, 0.01, rng);
    std::vector<double> x(sizes.front());
    for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
    const std::size_t action = uniform_index(rng, sizes.back());
    const double target = 4.0 * uniform01(rng) - 2.0;
    worst = std::max(worst, oracle::max_gradient_error(net, x, action, target));
  }
  report(6, "gradient check", worst < 1e-5, fmt("max relative error %.3g", worst));
}

void target_discriminator() {
  auto current = Mlp::zeros({2, 2}, 0.1);
  current.biases(0) << 0.0, 1.0;
  AgentOptions o;
  o.gamma = 0.5;
  DdqnAgent agent(current, 4, o);
  auto target = Mlp::zeros({2, 2}, 0.1);
  target.biases(0) << 5.0, 2.0;
  agent.target_net() = target;
  const Transition tr{{{1}, 2}, {1}, 1.0, {{2}, 3}, 0.0};
  const double ddqn = ddqn_target(agent, tr);
  const double dqn = independent_dqn_target(agent, tr);
  report(7, "ddqn/dqn discriminator", ddqn != dqn, fmt("ddqn %.6g dqn %.6g", ddqn, dqn));
}

Transition random_transition(Rng& rng, std::size_t s, std::size_t f) {
  Transition tr;
  for (std::size_t i = 0; i < s; ++i) tr.state.cached.push_back(static_cast<FileId>(i + 1));
  tr.state.requested = static_cast<FileId>(1 + uniform_index(rng, f));
  tr.action = {tr.state.holds(tr.state.requested) ? 0 : uniform_index(rng, s + 1)};
  tr.next_state = apply_action(tr.state, tr.action);
  tr.next_state.requested = static_cast<FileId>(1 + uniform_index(rng, f));
  tr.reward = 3.0 * uniform01(rng);
  return tr;
}

void marl_degeneracies() {
  Rng rng = make_stream(11, Stream::init);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    AgentOptions o;
    DdqnAgent agent(Mlp({4, 8, 4}, 0.1, rng), 10, o);
    agent.target_net() = Mlp({4, 8, 4}, 0.1, rng);
    const auto tr = random_transition(rng, 3, 10);
    worst = std::max(worst, std::abs(marl_target(agent, tr) - ddqn_target(agent, tr)));
  }

  SimConfig cfg;
  cfg.n_faps = 1;
  cfg.horizon = 150;
  const auto topo = build_topology(cfg);
  const auto radio = radio_params(cfg);
  MarlScheme marl(cfg, topo);
  Environment env(cfg, topo);
  bool single_ok = true;
  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    const SlotContext ctx{t, env.current(), env.upcoming(), topo, radio, cfg};
    marl.step(ctx);
    env.advance();
  }
  const auto& agent = marl.agent(0);
  Rng pick = make_stream(12, Stream::init);
  for (int i = 0; i < 100; ++i) {
    const auto& tr = agent.memory()[uniform_index(pick, agent.memory().size())];
    if (tr.neighbor_count != 0.0 || marl_target(agent, tr) != ddqn_target(agent, tr))
      single_ok = false;
  }
  report(8, "marl target degeneracies", worst <= 1e-12 && single_ok,
         fmt("zero-count max difference %.3g, ", worst) +
             (single_ok ? "single F-AP matches" : "single F-AP differs"));
}

void constraint_safety() {
  // Random action sequences straight on the cache primitives, including
  // attempts at duplicates, which must be refused without side effects.
  Rng rng = make_stream(99, Stream::exploration);
  std::size_t violations = 0;
  std::size_t refused = 0;
  for (int seq = 0; seq < 10000; ++seq) {
    const std::size_t f = 2 + uniform_index(rng, 9);
    const std::size_t s = 1 + uniform_index(rng, f);
    const std::size_t n = 1 + uniform_index(rng, 3);
    CacheMatrix cache(n, f, s);
    std::vector<AgentState> states(n, AgentState{std::vector<FileId>(s, 0), 0});
    for (int step = 0; step < 30; ++step) {
      const std::size_t fap = uniform_index(rng, n);
      auto& st = states[fap];
      st.requested = static_cast<FileId>(1 + uniform_index(rng, f));
      const ActionId a{uniform_index(rng, s + 1)};
      try {
        st = apply_action(st, a);
        if (a.value) cache.replace(fap, a.value - 1, st.requested);
      } catch (const DuplicateCacheError&) {
        ++refused;
      }
      if (!cache.consistent() || cache.occupancy(fap) > s) ++violations;
      const auto row = cache.slots(fap);
      if (!std::equal(row.begin(), row.end(), st.cached.begin())) ++violations;
    }
  }

  // Every scheme under fully random exploration.
  for (auto kind : {Scheme::marl, Scheme::dqn, Scheme::iql, Scheme::lru}) {
    SimConfig cfg;
    cfg.library_size = 8;
    cfg.cache_capacity = 3;
    cfg.epsilon_start = 1.0;
    cfg.epsilon_end = 1.0;
    cfg.horizon = 2500;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      cfg.seed = seed;
      const auto topo = build_topology(cfg);
      const auto radio = radio_params(cfg);
      auto scheme = make_scheme(kind, cfg, topo);
      Environment env(cfg, topo);
      for (std::size_t t = 1; t <= cfg.horizon; ++t) {
        const SlotContext ctx{t, env.current(), env.upcoming(), topo, radio, cfg};
        scheme->step(ctx);
        const auto& c = scheme->cache();
        if (!c.consistent()) ++violations;
        for (std::size_t n = 0; n < cfg.n_faps; ++n)
          if (c.occupancy(n) > cfg.cache_capacity) ++violations;
        env.advance();
      }
    }
  }
  report(9, "cache constraint safety", violations == 0,
         std::to_string(violations) + " violations, " + std::to_string(refused) +
             " duplicate attempts refused");
}

std::string metrics_text(const SimConfig& cfg) {
  const auto r = run_experiment(cfg);
  std::ostringstream out;
  write_metrics_csv(out, r.rows);
  return out.str();
}

void determinism() {
  SimConfig cfg;
  cfg.horizon = 400;
  bool ok = true;
  for (int check = 0; check < 2; ++check) {
    cfg.seed = 17 + static_cast<std::uint64_t>(check);
    const auto a = metrics_text(cfg);
    const auto b = metrics_text(cfg);
    ok = ok && !a.empty() && a == b;
  }
  report(10, "determinism", ok, ok ? "two seeds, byte-identical metrics" : "metrics differ");
}

}  // namespace

int main() {
  try {
    scheme_ordering();
    capacity_monotonicity();
    paired_marl(
        3, "cooperation benefit", [](SimConfig&) {},
        [](SimConfig& c) { c.connectivity.pattern = ConnectivityPattern::none; }, true);
    paired_marl(
        4, "preference consistency", [](SimConfig&) {},
        [](SimConfig& c) { c.consistent_preference = false; }, false);
    objective_oracle();
    gradient_check();
    target_discriminator();
    marl_degeneracies();
    constraint_safety();
    determinism();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
