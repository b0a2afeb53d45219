#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fogcache {

enum class Scheme { marl, dqn, iql, lru };

/// How Z2 combines several helper F-APs: the printed per-helper sum, or a
/// pooled-rate variant Q / sum(x * R).
enum class CoopDelayMode { literal, harmonic };

/// Mean over members, or the literal sum.
enum class Aggregation { mean, sum };

/// State at which the counter-scaled target evaluates the target network.
enum class TargetState { current, next };

/// Target-network refresh clock: agent learning steps or time slots.
enum class SyncMode { steps, slots };

/// Q-network input: slot ids and request scaled by 1/F (length S+1), or a
/// multi-hot cache indicator followed by a one-hot request (length 2F).
enum class StateEncoding { scaled, onehot };

enum class Optimizer { sgd, adam };

enum class ConnectivityPattern { full, ring, none, explicit_matrix };

struct Connectivity {
  ConnectivityPattern pattern = ConnectivityPattern::full;
  std::vector<std::vector<int>> matrix;  // only for explicit_matrix
};

/// Full experiment parameterization. Physical quantities are SI.
/// Defaults are the desk-scale scenario (N=3, F=50, S=5, 15 users per F-AP).
struct SimConfig {
  std::size_t n_faps = 3;
  std::size_t users_per_fap = 15;
  std::size_t library_size = 50;
  std::size_t cache_capacity = 5;
  std::size_t horizon = 5000;

  double tau = 1.1;
  double lambda = 1.0;
  // Delays enter the reward exponent in units of this many seconds.
  double reward_time_unit = 0.001;
  double gamma = 0.9;
  double alpha = 0.001;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.5;
  std::size_t nu = 100;
  SyncMode sync_mode = SyncMode::steps;
  std::size_t replay_capacity = 10000;
  std::size_t batch_size = 32;
  std::vector<std::size_t> hidden_layers{64, 64};
  double grad_clip = 1.0;  // 0 disables
  StateEncoding state_encoding = StateEncoding::onehot;
  Optimizer optimizer = Optimizer::adam;
  double iql_alpha = 0.1;
  std::size_t iql_table_cap = 1000000;

  double bandwidth = 100e6;
  double tx_power = 1.0;
  double noise_psd = 3.98e-21;  // -174 dBm/Hz
  double interference_power = 1e-12;
  double pathloss_exponent = 3.0;
  bool literal_distance = false;
  double file_size = 1e6;
  double backhaul_rate = 100e6;
  double inter_fap_rate = 1e9;
  double rate_floor = 1e3;
  double cell_radius = 100.0;

  Connectivity connectivity;
  bool consistent_preference = true;
  bool mobility = true;
  CoopDelayMode coop_delay_mode = CoopDelayMode::literal;
  Aggregation popularity_aggregation = Aggregation::mean;
  Aggregation observation_aggregation = Aggregation::mean;
  TargetState target_state = TargetState::next;

  std::uint64_t seed = 1;
  std::vector<Scheme> schemes{Scheme::marl, Scheme::dqn, Scheme::iql, Scheme::lru};
  std::size_t record_interval = 1;
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);
std::vector<Scheme> parse_scheme_list(std::string_view csv);

/// Every invariant violation, one message per offending key. Empty if valid.
std::vector<std::string> config_issues(const SimConfig& cfg);

/// Throws ConfigError listing all issues.
void validate_config(const SimConfig& cfg);

SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& cfg);

/// Reads a JSON config file. An empty file yields all defaults. Unknown keys
/// and invalid values raise ConfigError.
SimConfig load_config(const std::filesystem::path& path);

}  // namespace fogcache
