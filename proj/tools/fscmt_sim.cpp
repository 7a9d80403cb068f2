// fscmt_sim: scenario runner for the FS-CMT massive MIMO simulator.
//
//   fscmt_sim run --config <path> [--scenario NAME] [--seed U64] [--out DIR]
//                 [--trials N] [--threads N]
//   fscmt_sim validate --config <path>
//   fscmt_sim selftest

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fscmt/config.hpp"
#include "fscmt/experiment.hpp"
#include "fscmt/selftest.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::optional<std::string>& scenario,
            const std::optional<std::uint64_t>& seed, const std::optional<std::string>& out,
            const std::optional<int>& trials, const std::optional<int>& threads) {
  fscmt::ScenarioConfig config = fscmt::load_config(config_path);
  if (scenario) config.scenario = fscmt::parse_scenario(*scenario);
  if (seed) config.master_seed = *seed;
  if (out) config.out_dir = *out;
  if (trials) config.realizations = *trials;
  if (threads) config.threads = *threads;
  fscmt::validate(config);

  const int workers = fscmt::resolve_threads(config.threads);
  const auto result = fscmt::run_scenario(config, workers);
  const auto record = fscmt::write_outputs(result, config.out_dir);

  for (const auto& [k, v] : result.summary) std::cerr << k << " = " << v << "\n";
  std::cout << record.csv_path.string() << "\n" << record.meta_path.string() << "\n";
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const fscmt::ScenarioConfig config = fscmt::load_config(config_path);
  fscmt::validate(config);
  std::cout << "ok: " << fscmt::to_string(config.scenario) << "\n";
  return 0;
}

int cmd_selftest() {
  bool all = true;
  for (const auto& c : fscmt::run_selftest()) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    all = all && c.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FS-CMT massive MIMO link-level simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fscmt::version_string());

  std::string config_path;
  std::optional<std::string> scenario, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials, threads;

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV + metadata");
  run->add_option("--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("--scenario", scenario, "Override scenario name");
  run->add_option("--seed", seed, "Override master seed");
  run->add_option("--out", out, "Output directory");
  run->add_option("--trials", trials, "Override number of realizations")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "Worker threads (FSE_SIM_THREADS overrides)")
      ->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);

  app.add_subcommand("selftest", "Run the built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return cmd_run(config_path, scenario, seed, out, trials, threads);
    if (validate->parsed()) return cmd_validate(config_path);
    return cmd_selftest();
  } catch (const fscmt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
