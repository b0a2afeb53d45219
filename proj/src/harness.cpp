#include "fogcache/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fogcache/environment.hpp"
#include "fogcache/errors.hpp"
#include "fogcache/neural.hpp"
#include "fogcache/radio.hpp"
#include "fogcache/scheme.hpp"

namespace fogcache {

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Accumulator {
  double sum = 0.0;
  double tail_sum = 0.0;
  std::size_t count = 0;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

void expect_line(std::istream& in, const char* expected) {
  std::string line;
  if (!std::getline(in, line) || line != expected) {
    throw std::runtime_error(std::string("csv: expected '") + expected + "', got '" + line + "'");
  }
}

}  // namespace

const SummaryRow& RunResult::summary_for(Scheme s) const {
  for (const auto& row : summary) {
    if (row.scheme == s) return row;
  }
  throw std::out_of_range("RunResult: scheme not in run");
}

std::size_t tail_length(std::size_t horizon) { return std::max<std::size_t>(1, horizon / 4); }

RunResult run_experiment(const SimConfig& cfg) {
  validate_config(cfg);
  RunResult result;
  const auto topology = build_topology(cfg);
  const auto radio = radio_params(cfg);

  std::vector<std::unique_ptr<CachingScheme>> schemes;
  for (auto kind : cfg.schemes) schemes.push_back(make_scheme(kind, cfg, topology));
  std::vector<Accumulator> acc(schemes.size());
  const auto tail_start = cfg.horizon - tail_length(cfg.horizon) + 1;

  try {
    Environment env(cfg, topology);
    for (std::size_t t = 1; t <= cfg.horizon; ++t) {
      const SlotContext ctx{t, env.current(), env.upcoming(), topology, radio, cfg};
      for (std::size_t i = 0; i < schemes.size(); ++i) {
        schemes[i]->step(ctx);
        const auto eval = evaluate(schemes[i]->cache(), ctx);
        auto& a = acc[i];
        a.sum += eval.objective;
        ++a.count;
        if (t >= tail_start) a.tail_sum += eval.objective;
        if (t % cfg.record_interval == 0) {
          double reward = 0.0;
          for (auto r : eval.reward) reward += r;
          result.rows.push_back({t, schemes[i]->kind(), eval.objective,
                                 a.sum / static_cast<double>(a.count), reward, eval.tier_mass[0],
                                 eval.tier_mass[1], eval.tier_mass[2], cfg.seed});
        }
      }
      if (t < cfg.horizon) env.advance();
    }
    result.stream_hash = env.stream_hash();
  } catch (const std::exception& e) {
    result.complete = false;
    result.error = e.what();
    return result;
  }

  const auto tail = static_cast<double>(tail_length(cfg.horizon));
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    result.summary.push_back({schemes[i]->kind(), cfg.cache_capacity, cfg.horizon, cfg.seed,
                              acc[i].sum / static_cast<double>(cfg.horizon),
                              acc[i].tail_sum / tail});
  }
  return result;
}

RunResult run_experiment(const SimConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream echo(out_dir / "config.resolved.json");
    echo << config_to_json(cfg).dump(2) << '\n';
  }
  auto result = run_experiment(cfg);
  {
    std::ofstream metrics(out_dir / "metrics.csv", std::ios::binary);
    write_metrics_csv(metrics, result.rows);
    if (!result.complete) metrics << "# incomplete: " << result.error << '\n';
  }
  if (!result.complete) throw std::runtime_error("run failed: " + result.error);
  std::ofstream summary(out_dir / "summary.csv", std::ios::binary);
  write_summary_csv(summary, result.summary);
  return result;
}

std::vector<RunResult> run_batch(std::span<const SimConfig> configs) {
  std::vector<RunResult> results(configs.size());
  const auto count = static_cast<std::ptrdiff_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      results[k] = run_experiment(configs[k]);
    } catch (const std::exception& e) {
      results[k].complete = false;
      results[k].error = e.what();
    }
  }
  return results;
}

std::vector<SummaryRow> sweep_capacity(const SimConfig& cfg,
                                       std::span<const std::size_t> capacities,
                                       const std::optional<std::filesystem::path>& out_dir) {
  if (capacities.empty()) throw ConfigError("sweep: capacity list is empty");
  std::vector<SimConfig> configs;
  for (auto s : capacities) {
    if (s == 0 || s > cfg.library_size) {
      throw ConfigError("sweep: capacity " + std::to_string(s) + " outside 1..library_size");
    }
    auto c = cfg;
    c.cache_capacity = s;
    configs.push_back(c);
  }
  const auto results = run_batch(configs);
  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].complete) {
      throw std::runtime_error("sweep: S=" + std::to_string(capacities[i]) +
                               " failed: " + results[i].error);
    }
    rows.insert(rows.end(), results[i].summary.begin(), results[i].summary.end());
    if (out_dir) {
      const auto dir = *out_dir / ("S" + std::to_string(capacities[i]));
      std::filesystem::create_directories(dir);
      std::ofstream m(dir / "metrics.csv", std::ios::binary);
      write_metrics_csv(m, results[i].rows);
      std::ofstream s(dir / "summary.csv", std::ios::binary);
      write_summary_csv(s, results[i].summary);
    }
  }
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    std::ofstream echo(*out_dir / "config.resolved.json");
    echo << config_to_json(cfg).dump(2) << '\n';
    std::ofstream out(*out_dir / "capacity_summary.csv", std::ios::binary);
    write_summary_csv(out, rows);
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows) {
  out << kMetricsSchema << '\n' << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << to_string(r.scheme) << ',' << fmt_real(r.inst_delay) << ','
        << fmt_real(r.cum_delay) << ',' << fmt_real(r.global_reward) << ','
        << fmt_real(r.hit_local) << ',' << fmt_real(r.hit_neighbor) << ','
        << fmt_real(r.hit_cloud) << ',' << r.seed << '\n';
  }
  out.flush();
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << kSummarySchema << '\n' << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << r.capacity << ',' << r.horizon << ',' << r.seed << ','
        << fmt_real(r.mean_delay) << ',' << fmt_real(r.tail_mean_delay) << '\n';
  }
  out.flush();
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  expect_line(in, kMetricsSchema);
  expect_line(in, kMetricsHeader);
  std::vector<MetricsRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto c = split_csv(line);
    if (c.size() != 9) throw std::runtime_error("csv: bad metrics row '" + line + "'");
    rows.push_back({std::stoull(c[0]), parse_scheme(c[1]), std::stod(c[2]), std::stod(c[3]),
                    std::stod(c[4]), std::stod(c[5]), std::stod(c[6]), std::stod(c[7]),
                    std::stoull(c[8])});
  }
  return rows;
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  expect_line(in, kSummarySchema);
  expect_line(in, kSummaryHeader);
  std::vector<SummaryRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto c = split_csv(line);
    if (c.size() != 6) throw std::runtime_error("csv: bad summary row '" + line + "'");
    rows.push_back({parse_scheme(c[0]), std::stoull(c[1]), std::stoull(c[2]), std::stoull(c[3]),
                    std::stod(c[4]), std::stod(c[5])});
  }
  return rows;
}

namespace {

// Central differences against Mlp::gradient on a small random network.
bool gradient_self_check(std::uint64_t seed, double& worst) {
  Rng rng = make_stream(seed, Stream::init, 0xfd);
  Mlp net({4, 8, 8, 3}, 0.001, rng);
  std::vector<double> x{0.2, -0.4, 0.7, 0.1};
  const std::size_t action = 1;
  const double target = 0.8;
  const auto g = net.gradient(x, action, target);
  auto loss = [&](const Mlp& m) {
    const double q = m.forward(x)(static_cast<Eigen::Index>(action));
    return (target - q) * (target - q);
  };
  const double h = 1e-6;
  worst = 0.0;
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    for (Eigen::Index i = 0; i < net.weights(l).size(); ++i) {
      Mlp plus = net, minus = net;
      plus.weights(l).data()[i] += h;
      minus.weights(l).data()[i] -= h;
      const double fd = (loss(plus) - loss(minus)) / (2 * h);
      const double an = g.weights[l].data()[i];
      if (std::abs(fd) < 1e-7 && std::abs(an) < 1e-7) continue;
      worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(fd), std::abs(an)));
    }
  }
  return worst < 1e-5;
}

}  // namespace

ValidationReport validate(const SimConfig& cfg) {
  ValidationReport report;
  const auto issues = config_issues(cfg);
  report.config_ok = issues.empty();
  report.lines.push_back(std::string("config: ") + (report.config_ok ? "ok" : "INVALID"));
  for (const auto& s : issues) report.lines.push_back("  " + s);

  const auto radio = radio_params(cfg);
  const double median_distance = cfg.cell_radius / std::numbers::sqrt2;
  const double median_gain = std::numbers::ln2;
  double rate = wireless_rate(radio, median_gain, median_distance);
  if (!(rate > radio.rate_floor)) rate = radio.rate_floor;
  report.z1 = delay_fap_to_user(radio, rate);
  const std::uint8_t one_helper[] = {1};
  report.z2 = delay_fap_to_fap(radio, one_helper);
  report.z3 = delay_cloud_to_fap(radio);
  const auto ordering = validate_delay_ordering(report.z1, report.z2, report.z3);
  report.ordering_ok = ordering.ok;
  report.lines.push_back("delay ordering: " + std::string(ordering.ok ? "ok" : "WARNING") +
                         " (" + ordering.message + ")");
  report.lines.push_back("  Z1 = " + fmt_real(report.z1) + " s (median geometry)");
  report.lines.push_back("  Z2 = " + fmt_real(report.z2) + " s (one helper)");
  report.lines.push_back("  Z3 = " + fmt_real(report.z3) + " s");

  double worst = 0.0;
  report.gradient_ok = gradient_self_check(cfg.seed, worst);
  report.lines.push_back("gradient check: " + std::string(report.gradient_ok ? "ok" : "FAILED") +
                         " (max relative error " + fmt_real(worst) + ")");
  report.lines.push_back("resolved config:");
  report.lines.push_back(config_to_json(cfg).dump(2));
  return report;
}

}  // namespace fogcache
