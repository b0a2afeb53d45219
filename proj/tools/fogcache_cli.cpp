#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fogcache/config.hpp"
#include "fogcache/errors.hpp"
#include "fogcache/harness.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string schemes;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_out) {
  cmd->add_option("--config", a.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "Master seed (overrides config)");
  if (with_out) cmd->add_option("--out", a.out, "Output directory");
  cmd->add_option("--schemes", a.schemes, "Comma-separated subset of marl,dqn,iql,lru");
  cmd->add_flag("--quiet", a.quiet, "Suppress progress output");
}

fogcache::SimConfig resolve(const CommonArgs& a) {
  auto cfg = a.config.empty() ? fogcache::SimConfig{} : fogcache::load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (!a.schemes.empty()) cfg.schemes = fogcache::parse_scheme_list(a.schemes);
  fogcache::validate_config(cfg);
  return cfg;
}

void print_summary(const std::vector<fogcache::SummaryRow>& rows) {
  for (const auto& r : rows) {
    std::printf("%-5s S=%-3zu T=%-6zu mean_delay=%.6g s  tail_mean_delay=%.6g s\n",
                std::string(fogcache::to_string(r.scheme)).c_str(), r.capacity, r.horizon,
                r.mean_delay, r.tail_mean_delay);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative edge caching simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, validate_args;
  std::vector<std::size_t> capacities;

  auto* run = app.add_subcommand("run", "Simulate one configuration");
  add_common(run, run_args, true);
  auto* sweep = app.add_subcommand("sweep", "Simulate a list of cache capacities");
  add_common(sweep, sweep_args, true);
  sweep->add_option("--capacities", capacities, "Cache capacities, e.g. 5,10,15")
      ->delimiter(',')
      ->required();
  auto* val = app.add_subcommand("validate", "Check a configuration without training");
  add_common(val, validate_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const auto cfg = resolve(run_args);
      const auto result = fogcache::run_experiment(cfg, run_args.out);
      if (!run_args.quiet) {
        print_summary(result.summary);
        std::printf("wrote %s\n", run_args.out.c_str());
      }
    } else if (*sweep) {
      const auto cfg = resolve(sweep_args);
      const auto rows = fogcache::sweep_capacity(cfg, capacities, sweep_args.out);
      if (!sweep_args.quiet) {
        print_summary(rows);
        std::printf("wrote %s\n", sweep_args.out.c_str());
      }
    } else if (*val) {
      auto cfg = validate_args.config.empty() ? fogcache::SimConfig{}
                                              : fogcache::load_config(validate_args.config);
      if (validate_args.seed) cfg.seed = *validate_args.seed;
      if (!validate_args.schemes.empty()) {
        cfg.schemes = fogcache::parse_scheme_list(validate_args.schemes);
      }
      const auto report = fogcache::validate(cfg);
      if (!validate_args.quiet || !report.ok()) {
        for (const auto& line : report.lines) std::cout << line << '\n';
      }
      if (!report.config_ok) return 1;
      if (!report.gradient_ok) return 2;
    }
  } catch (const fogcache::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
