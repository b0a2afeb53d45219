#include "fogcache/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fogcache/errors.hpp"

namespace fogcache {

namespace {

using json = nlohmann::json;

template <typename Enum>
struct EnumName {
  Enum value;
  std::string_view name;
};

constexpr EnumName<Scheme> kSchemes[] = {
    {Scheme::marl, "marl"}, {Scheme::dqn, "dqn"}, {Scheme::iql, "iql"}, {Scheme::lru, "lru"}};
constexpr EnumName<CoopDelayMode> kCoop[] = {{CoopDelayMode::literal, "literal"},
                                             {CoopDelayMode::harmonic, "harmonic"}};
constexpr EnumName<Aggregation> kAgg[] = {{Aggregation::mean, "mean"}, {Aggregation::sum, "sum"}};
constexpr EnumName<TargetState> kTarget[] = {{TargetState::current, "current"},
                                             {TargetState::next, "next"}};
constexpr EnumName<StateEncoding> kEncoding[] = {{StateEncoding::scaled, "scaled"},
                                                  {StateEncoding::onehot, "onehot"}};
constexpr EnumName<Optimizer> kOptimizer[] = {{Optimizer::sgd, "sgd"}, {Optimizer::adam, "adam"}};
constexpr EnumName<SyncMode> kSync[] = {{SyncMode::steps, "steps"}, {SyncMode::slots, "slots"}};
constexpr EnumName<ConnectivityPattern> kPattern[] = {{ConnectivityPattern::full, "full"},
                                                      {ConnectivityPattern::ring, "ring"},
                                                      {ConnectivityPattern::none, "none"}};

template <typename Enum, std::size_t K>
std::string_view enum_name(const EnumName<Enum> (&table)[K], Enum v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "?";
}

template <typename Enum, std::size_t K>
Enum enum_parse(const EnumName<Enum> (&table)[K], std::string_view key, std::string_view s) {
  for (const auto& e : table) {
    if (e.name == s) return e.value;
  }
  std::string allowed;
  for (const auto& e : table) {
    if (!allowed.empty()) allowed += "|";
    allowed += e.name;
  }
  throw ConfigError(std::string(key) + ": unknown value '" + std::string(s) + "' (expected " +
                    allowed + ")");
}

std::size_t as_count(const json& v, std::string_view key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string(key) + ": expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

double as_real(const json& v, std::string_view key) {
  if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return v.get<double>();
}

bool as_bool(const json& v, std::string_view key) {
  if (!v.is_boolean()) throw ConfigError(std::string(key) + ": expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, std::string_view key) {
  if (!v.is_string()) throw ConfigError(std::string(key) + ": expected a string");
  return v.get<std::string>();
}

Connectivity parse_connectivity(const json& v) {
  Connectivity c;
  if (v.is_string()) {
    c.pattern = enum_parse(kPattern, "connectivity", v.get<std::string>());
    return c;
  }
  if (!v.is_array()) {
    throw ConfigError("connectivity: expected full|ring|none or a 0/1 matrix");
  }
  c.pattern = ConnectivityPattern::explicit_matrix;
  for (const auto& row : v) {
    if (!row.is_array()) throw ConfigError("connectivity: matrix rows must be arrays");
    std::vector<int> r;
    for (const auto& e : row) {
      if (!e.is_number_integer() || (e.get<int>() != 0 && e.get<int>() != 1)) {
        throw ConfigError("connectivity: matrix entries must be 0 or 1");
      }
      r.push_back(e.get<int>());
    }
    c.matrix.push_back(std::move(r));
  }
  return c;
}

using Setter = std::function<void(SimConfig&, const json&)>;

#define FOGCACHE_COUNT(field) \
  {#field, [](SimConfig& c, const json& v) { c.field = as_count(v, #field); }}
#define FOGCACHE_REAL(field) \
  {#field, [](SimConfig& c, const json& v) { c.field = as_real(v, #field); }}
#define FOGCACHE_BOOL(field) \
  {#field, [](SimConfig& c, const json& v) { c.field = as_bool(v, #field); }}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      FOGCACHE_COUNT(n_faps),
      FOGCACHE_COUNT(users_per_fap),
      FOGCACHE_COUNT(library_size),
      FOGCACHE_COUNT(cache_capacity),
      FOGCACHE_COUNT(horizon),
      FOGCACHE_REAL(tau),
      FOGCACHE_REAL(lambda),
      FOGCACHE_REAL(reward_time_unit),
      FOGCACHE_REAL(gamma),
      FOGCACHE_REAL(alpha),
      FOGCACHE_REAL(epsilon_start),
      FOGCACHE_REAL(epsilon_end),
      FOGCACHE_REAL(epsilon_decay_fraction),
      FOGCACHE_COUNT(nu),
      {"sync_mode",
       [](SimConfig& c, const json& v) {
         c.sync_mode = enum_parse(kSync, "sync_mode", as_string(v, "sync_mode"));
       }},
      FOGCACHE_COUNT(replay_capacity),
      FOGCACHE_COUNT(batch_size),
      {"hidden_layers",
       [](SimConfig& c, const json& v) {
         if (!v.is_array()) throw ConfigError("hidden_layers: expected an array of counts");
         c.hidden_layers.clear();
         for (const auto& e : v) c.hidden_layers.push_back(as_count(e, "hidden_layers"));
       }},
      FOGCACHE_REAL(grad_clip),
      FOGCACHE_REAL(iql_alpha),
      FOGCACHE_COUNT(iql_table_cap),
      FOGCACHE_REAL(bandwidth),
      FOGCACHE_REAL(tx_power),
      FOGCACHE_REAL(noise_psd),
      FOGCACHE_REAL(interference_power),
      FOGCACHE_REAL(pathloss_exponent),
      FOGCACHE_BOOL(literal_distance),
      FOGCACHE_REAL(file_size),
      FOGCACHE_REAL(backhaul_rate),
      FOGCACHE_REAL(inter_fap_rate),
      FOGCACHE_REAL(rate_floor),
      FOGCACHE_REAL(cell_radius),
      {"connectivity", [](SimConfig& c, const json& v) { c.connectivity = parse_connectivity(v); }},
      FOGCACHE_BOOL(consistent_preference),
      FOGCACHE_BOOL(mobility),
      {"coop_delay_mode",
       [](SimConfig& c, const json& v) {
         c.coop_delay_mode =
             enum_parse(kCoop, "coop_delay_mode", as_string(v, "coop_delay_mode"));
       }},
      {"popularity_aggregation",
       [](SimConfig& c, const json& v) {
         c.popularity_aggregation = enum_parse(kAgg, "popularity_aggregation",
                                               as_string(v, "popularity_aggregation"));
       }},
      {"observation_aggregation",
       [](SimConfig& c, const json& v) {
         c.observation_aggregation = enum_parse(kAgg, "observation_aggregation",
                                                as_string(v, "observation_aggregation"));
       }},
      {"state_encoding",
       [](SimConfig& c, const json& v) {
         c.state_encoding =
             enum_parse(kEncoding, "state_encoding", as_string(v, "state_encoding"));
       }},
      {"optimizer",
       [](SimConfig& c, const json& v) {
         c.optimizer = enum_parse(kOptimizer, "optimizer", as_string(v, "optimizer"));
       }},
      {"target_state",
       [](SimConfig& c, const json& v) {
         c.target_state = enum_parse(kTarget, "target_state", as_string(v, "target_state"));
       }},
      {"seed",
       [](SimConfig& c, const json& v) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
           throw ConfigError("seed: expected a nonnegative integer");
         }
         c.seed = v.get<std::uint64_t>();
       }},
      {"schemes",
       [](SimConfig& c, const json& v) {
         if (!v.is_array()) throw ConfigError("schemes: expected an array of names");
         c.schemes.clear();
         for (const auto& e : v) c.schemes.push_back(parse_scheme(as_string(e, "schemes")));
       }},
      FOGCACHE_COUNT(record_interval),
  };
  return table;
}

#undef FOGCACHE_COUNT
#undef FOGCACHE_REAL
#undef FOGCACHE_BOOL

}  // namespace

std::string_view to_string(Scheme s) { return enum_name(kSchemes, s); }

Scheme parse_scheme(std::string_view name) { return enum_parse(kSchemes, "schemes", name); }

std::vector<Scheme> parse_scheme_list(std::string_view csv) {
  std::vector<Scheme> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto end = std::min(csv.find(',', start), csv.size());
    const auto item = csv.substr(start, end - start);
    if (!item.empty()) out.push_back(parse_scheme(item));
    start = end + 1;
  }
  if (out.empty()) throw ConfigError("schemes: empty list");
  return out;
}

std::vector<std::string> config_issues(const SimConfig& c) {
  std::vector<std::string> issues;
  auto require = [&](bool ok, std::string msg) {
    if (!ok) issues.push_back(std::move(msg));
  };
  auto positive = [&](double v, const char* key) {
    require(std::isfinite(v) && v > 0.0, std::string(key) + ": must be > 0");
  };

  require(c.n_faps >= 1, "n_faps: must be >= 1");
  require(c.users_per_fap >= 1, "users_per_fap: must be >= 1");
  require(c.library_size >= 1, "library_size: must be >= 1");
  require(c.cache_capacity >= 1, "cache_capacity: must be >= 1");
  require(c.cache_capacity <= c.library_size, "cache_capacity: must not exceed library_size");
  require(c.horizon >= 1, "horizon: must be >= 1");
  positive(c.tau, "tau");
  require(c.lambda > 0.0 && c.lambda <= 1.0, "lambda: must lie in (0, 1]");
  positive(c.reward_time_unit, "reward_time_unit");
  require(c.gamma >= 0.0 && c.gamma < 1.0, "gamma: must lie in [0, 1)");
  positive(c.alpha, "alpha");
  require(c.epsilon_start >= 0.0 && c.epsilon_start <= 1.0, "epsilon_start: must lie in [0, 1]");
  require(c.epsilon_end >= 0.0 && c.epsilon_end <= 1.0, "epsilon_end: must lie in [0, 1]");
  require(c.epsilon_decay_fraction >= 0.0 && c.epsilon_decay_fraction <= 1.0,
          "epsilon_decay_fraction: must lie in [0, 1]");
  require(c.nu >= 1, "nu: must be >= 1");
  require(c.replay_capacity >= 1, "replay_capacity: must be >= 1");
  require(c.batch_size >= 1, "batch_size: must be >= 1");
  require(c.batch_size <= c.replay_capacity, "batch_size: must not exceed replay_capacity");
  for (auto h : c.hidden_layers) require(h >= 1, "hidden_layers: every layer needs >= 1 unit");
  require(std::isfinite(c.grad_clip) && c.grad_clip >= 0.0, "grad_clip: must be >= 0");
  require(c.iql_alpha > 0.0 && c.iql_alpha <= 1.0, "iql_alpha: must lie in (0, 1]");
  require(c.iql_table_cap >= 1, "iql_table_cap: must be >= 1");
  positive(c.bandwidth, "bandwidth");
  positive(c.tx_power, "tx_power");
  positive(c.noise_psd, "noise_psd");
  positive(c.interference_power, "interference_power");
  positive(c.pathloss_exponent, "pathloss_exponent");
  positive(c.file_size, "file_size");
  positive(c.backhaul_rate, "backhaul_rate");
  positive(c.inter_fap_rate, "inter_fap_rate");
  positive(c.rate_floor, "rate_floor");
  positive(c.cell_radius, "cell_radius");
  require(!c.schemes.empty(), "schemes: must name at least one scheme");
  require(c.record_interval >= 1, "record_interval: must be >= 1");

  if (c.connectivity.pattern == ConnectivityPattern::explicit_matrix) {
    const auto& m = c.connectivity.matrix;
    bool square = m.size() == c.n_faps;
    for (const auto& row : m) square = square && row.size() == c.n_faps;
    require(square, "connectivity: matrix must be n_faps x n_faps");
    if (square) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        require(m[i][i] == 0, "connectivity: diagonal must be zero");
        for (std::size_t j = 0; j < m.size(); ++j) {
          require(m[i][j] == m[j][i], "connectivity: matrix must be symmetric");
        }
      }
    }
  }
  // Collapse repeats from the per-entry matrix checks.
  std::vector<std::string> unique;
  for (auto& s : issues) {
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(std::move(s));
  }
  return unique;
}

void validate_config(const SimConfig& cfg) {
  const auto issues = config_issues(cfg);
  if (issues.empty()) return;
  std::ostringstream msg;
  msg << "invalid configuration:";
  for (const auto& s : issues) msg << "\n  " << s;
  throw ConfigError(msg.str());
}

SimConfig config_from_json(const nlohmann::json& j) {
  SimConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  const auto& table = setters();
  for (const auto& [key, value] : j.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key + ": unknown key");
    it->second(cfg, value);
  }
  validate_config(cfg);
  return cfg;
}

nlohmann::json config_to_json(const SimConfig& c) {
  json j;
  j["n_faps"] = c.n_faps;
  j["users_per_fap"] = c.users_per_fap;
  j["library_size"] = c.library_size;
  j["cache_capacity"] = c.cache_capacity;
  j["horizon"] = c.horizon;
  j["tau"] = c.tau;
  j["lambda"] = c.lambda;
  j["reward_time_unit"] = c.reward_time_unit;
  j["gamma"] = c.gamma;
  j["alpha"] = c.alpha;
  j["epsilon_start"] = c.epsilon_start;
  j["epsilon_end"] = c.epsilon_end;
  j["epsilon_decay_fraction"] = c.epsilon_decay_fraction;
  j["nu"] = c.nu;
  j["sync_mode"] = enum_name(kSync, c.sync_mode);
  j["replay_capacity"] = c.replay_capacity;
  j["batch_size"] = c.batch_size;
  j["hidden_layers"] = c.hidden_layers;
  j["grad_clip"] = c.grad_clip;
  j["iql_alpha"] = c.iql_alpha;
  j["iql_table_cap"] = c.iql_table_cap;
  j["bandwidth"] = c.bandwidth;
  j["tx_power"] = c.tx_power;
  j["noise_psd"] = c.noise_psd;
  j["interference_power"] = c.interference_power;
  j["pathloss_exponent"] = c.pathloss_exponent;
  j["literal_distance"] = c.literal_distance;
  j["file_size"] = c.file_size;
  j["backhaul_rate"] = c.backhaul_rate;
  j["inter_fap_rate"] = c.inter_fap_rate;
  j["rate_floor"] = c.rate_floor;
  j["cell_radius"] = c.cell_radius;
  if (c.connectivity.pattern == ConnectivityPattern::explicit_matrix) {
    j["connectivity"] = c.connectivity.matrix;
  } else {
    j["connectivity"] = enum_name(kPattern, c.connectivity.pattern);
  }
  j["consistent_preference"] = c.consistent_preference;
  j["mobility"] = c.mobility;
  j["coop_delay_mode"] = enum_name(kCoop, c.coop_delay_mode);
  j["popularity_aggregation"] = enum_name(kAgg, c.popularity_aggregation);
  j["observation_aggregation"] = enum_name(kAgg, c.observation_aggregation);
  j["target_state"] = enum_name(kTarget, c.target_state);
  j["state_encoding"] = enum_name(kEncoding, c.state_encoding);
  j["optimizer"] = enum_name(kOptimizer, c.optimizer);
  j["seed"] = c.seed;
  std::vector<std::string> names;
  for (auto s : c.schemes) names.emplace_back(to_string(s));
  j["schemes"] = names;
  j["record_interval"] = c.record_interval;
  return j;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return SimConfig{};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace fogcache
