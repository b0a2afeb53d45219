#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fogcache/config.hpp"

namespace fogcache {

inline constexpr const char* kMetricsSchema = "# fogcache-metrics v1";
inline constexpr const char* kSummarySchema = "# fogcache-summary v1";
inline constexpr const char* kMetricsHeader =
    "t,scheme,inst_delay_s,cum_delay_s,global_reward,hit_local,hit_neighbor,hit_cloud,seed";
inline constexpr const char* kSummaryHeader = "scheme,S,T,seed,mean_delay_s,tail_mean_delay_s";

struct MetricsRow {
  std::size_t t = 0;
  Scheme scheme = Scheme::lru;
  double inst_delay = 0.0;  // sum_n sum_f P_{n,f} d_{n,f} this slot
  double cum_delay = 0.0;   // running mean of inst_delay over slots 1..t
  double global_reward = 0.0;
  double hit_local = 0.0;
  double hit_neighbor = 0.0;
  double hit_cloud = 0.0;
  std::uint64_t seed = 0;
};

struct SummaryRow {
  Scheme scheme = Scheme::lru;
  std::size_t capacity = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  double mean_delay = 0.0;       // (1/T) sum_t inst_delay
  double tail_mean_delay = 0.0;  // mean over the final quarter of slots
};

struct RunResult {
  std::vector<MetricsRow> rows;
  std::vector<SummaryRow> summary;
  std::uint64_t stream_hash = 0;
  bool complete = true;
  std::string error;

  const SummaryRow& summary_for(Scheme s) const;
};

/// Number of final slots averaged into the tail mean.
std::size_t tail_length(std::size_t horizon);

/// Runs every configured scheme in lockstep over one shared realization
/// stream. Component errors are caught: the result is marked incomplete and
/// keeps the rows recorded so far.
RunResult run_experiment(const SimConfig& cfg);

/// As above, then writes metrics.csv, summary.csv and config.resolved.json to
/// `out_dir`. Throws std::runtime_error after flushing when the run failed.
RunResult run_experiment(const SimConfig& cfg, const std::filesystem::path& out_dir);

/// Independent runs, distributed over OpenMP threads. Order matches `configs`.
std::vector<RunResult> run_batch(std::span<const SimConfig> configs);

/// One run per capacity with a shared seed; returns all summary rows and, if
/// `out_dir` is given, writes capacity_summary.csv plus per-capacity run
/// directories. Throws ConfigError for an empty list or a capacity above F.
std::vector<SummaryRow> sweep_capacity(const SimConfig& cfg,
                                       std::span<const std::size_t> capacities,
                                       const std::optional<std::filesystem::path>& out_dir = {});

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
/// Parses a metrics file written by write_metrics_csv. Throws
/// std::runtime_error on schema mismatch.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

struct ValidationReport {
  bool config_ok = true;
  bool ordering_ok = true;
  bool gradient_ok = true;
  double z1 = 0.0;  // at median distance and median fading gain
  double z2 = 0.0;  // single helper
  double z3 = 0.0;
  std::vector<std::string> lines;

  bool ok() const { return config_ok && ordering_ok && gradient_ok; }
};

/// Config invariants, delay ordering at median geometry, a finite-difference
/// check of the Q-network gradient, and the resolved config.
ValidationReport validate(const SimConfig& cfg);

}  // namespace fogcache
