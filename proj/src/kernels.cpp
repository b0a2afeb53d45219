#include "fogcache/kernels.hpp"

#include <cstdint>

#include "fogcache/agent.hpp"

namespace fogcache {

namespace {

// Below this many (n, f) cells the thread start-up costs more than the work.
constexpr std::ptrdiff_t kParallelThreshold = 4096;

struct Cell {
  double delay;
  Tier tier;
};

Cell evaluate_cell(const SlotInputs& in, std::size_t n, std::size_t f, double z3) {
  const auto file = static_cast<FileId>(f + 1);
  const double z1 = in.z1(n, f);
  if (in.cache.cached(n, file)) return {z1, Tier::local};
  const auto nbrs = in.topology.neighbors(n);
  double helpers = 0.0;
  for (auto m : nbrs) helpers += in.cache.cached(m, file) ? 1.0 : 0.0;
  if (helpers == 0.0) return {z1 + z3, Tier::cloud};
  const double z2 = in.radio.coop_delay_mode == CoopDelayMode::harmonic
                        ? in.radio.file_size / (helpers * in.radio.inter_fap_rate)
                        : in.radio.file_size * helpers / in.radio.inter_fap_rate;
  return {z1 + z2, Tier::neighbor};
}

SlotEvaluation allocate(const SlotInputs& in) {
  const auto n_faps = in.cache.n_faps();
  const auto files = in.cache.library_size();
  SlotEvaluation out;
  out.delay = Grid(n_faps, files);
  out.tier.assign(n_faps * files, Tier::cloud);
  out.fap_delay.assign(n_faps, 0.0);
  out.reward.assign(n_faps, 0.0);
  return out;
}

void reduce_fap(const SlotInputs& in, SlotEvaluation& out, std::size_t n,
                std::array<double, 3>& mass) {
  const auto files = in.cache.library_size();
  const auto& pop = in.popularity[n].probs;
  double acc = 0.0;
  for (std::size_t f = 0; f < files; ++f) {
    acc += pop[f] * out.delay(n, f);
    mass[static_cast<std::size_t>(out.tier[n * files + f])] += pop[f];
  }
  out.fap_delay[n] = acc;
  out.reward[n] = local_reward(pop, out.delay.row(n), in.z1.row(n), in.lambda, in.time_unit);
}

void finish(SlotEvaluation& out, const std::vector<std::array<double, 3>>& mass) {
  double total = 0.0;
  std::array<double, 3> tiers{};
  for (std::size_t n = 0; n < out.fap_delay.size(); ++n) {
    out.objective += out.fap_delay[n];
    for (std::size_t k = 0; k < 3; ++k) tiers[k] += mass[n][k];
  }
  for (auto m : tiers) total += m;
  for (std::size_t k = 0; k < 3; ++k) out.tier_mass[k] = total > 0.0 ? tiers[k] / total : 0.0;
}

}  // namespace

SlotEvaluation evaluate_slot_serial(const SlotInputs& in) {
  auto out = allocate(in);
  const auto n_faps = in.cache.n_faps();
  const auto files = in.cache.library_size();
  const double z3 = delay_cloud_to_fap(in.radio);
  for (std::size_t n = 0; n < n_faps; ++n) {
    for (std::size_t f = 0; f < files; ++f) {
      const auto cell = evaluate_cell(in, n, f, z3);
      out.delay(n, f) = cell.delay;
      out.tier[n * files + f] = cell.tier;
    }
  }
  std::vector<std::array<double, 3>> mass(n_faps, std::array<double, 3>{});
  for (std::size_t n = 0; n < n_faps; ++n) reduce_fap(in, out, n, mass[n]);
  finish(out, mass);
  return out;
}

SlotEvaluation evaluate_slot(const SlotInputs& in) {
  auto out = allocate(in);
  const auto n_faps = static_cast<std::ptrdiff_t>(in.cache.n_faps());
  const auto files = static_cast<std::ptrdiff_t>(in.cache.library_size());
  const std::ptrdiff_t cells = n_faps * files;
  const double z3 = delay_cloud_to_fap(in.radio);

#pragma omp parallel for schedule(static) if (cells >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < cells; ++i) {
    const auto n = static_cast<std::size_t>(i / files);
    const auto f = static_cast<std::size_t>(i % files);
    const auto cell = evaluate_cell(in, n, f, z3);
    out.delay.values[static_cast<std::size_t>(i)] = cell.delay;
    out.tier[static_cast<std::size_t>(i)] = cell.tier;
  }

  std::vector<std::array<double, 3>> mass(static_cast<std::size_t>(n_faps),
                                          std::array<double, 3>{});
#pragma omp parallel for schedule(static) if (cells >= kParallelThreshold)
  for (std::ptrdiff_t n = 0; n < n_faps; ++n) {
    reduce_fap(in, out, static_cast<std::size_t>(n), mass[static_cast<std::size_t>(n)]);
  }
  finish(out, mass);
  return out;
}

}  // namespace fogcache
