#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fogcache/radio.hpp"

namespace fogcache {

/// Everything needed to score one joint cache state in one slot.
struct SlotInputs {
  const CacheMatrix& cache;
  const Topology& topology;
  const RadioParams& radio;
  std::span<const PopularityVector> popularity;  // one per F-AP
  const Grid& z1;                                // N x F
  double lambda = 1.0;
  double time_unit = 1.0;
};

struct SlotEvaluation {
  Grid delay;                      // d_{n,f}
  std::vector<Tier> tier;          // N*F, row-major
  std::vector<double> fap_delay;   // sum_f P_{n,f} d_{n,f}
  std::vector<double> reward;      // local reward per F-AP
  double objective = 0.0;          // sum_n fap_delay[n]
  std::array<double, 3> tier_mass{};  // popularity mass per tier, normalized to 1
};

/// Reference implementation: plain nested loops, n outer, f inner.
SlotEvaluation evaluate_slot_serial(const SlotInputs& in);

/// OpenMP version. Element-wise work is parallel; per-F-AP reductions keep the
/// serial summation order, so results are bit-identical to the reference.
SlotEvaluation evaluate_slot(const SlotInputs& in);

}  // namespace fogcache
