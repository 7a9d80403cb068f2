#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fscmt/config.hpp"
#include "fscmt/metrics.hpp"

namespace fscmt {

/// Receivers and oracles evaluated by a sweep.
struct SweepOptions {
  bool ppn = false;
  bool theory = false;
};

/// Aggregated results for one (L, Nr) point, one report per user.
struct SweepPoint {
  int subcarriers = 0;
  int antennas = 0;
  std::vector<SirReport> fse;
  std::vector<SirReport> ppn;
  std::vector<SirReport> theory;
};

/// Runs config.realizations trials for every L and Nr in the config. Each trial
/// draws one channel for max(Nr) antennas; smaller Nr use its first antennas.
/// Results depend only on the config, never on `threads`.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, SweepOptions options, int threads);

/// One CSV row of the fixed result schema.
struct CsvRow {
  std::string scenario;
  int user = 0;
  int subcarrier = 0;
  int antennas = 0;
  int subcarriers = 0;
  int overlap = 0;
  std::optional<double> snr_in_db;  // empty when noise-free
  std::string metric;
  double value_db = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

std::string csv_header();
std::string to_csv(const std::vector<CsvRow>& rows);

struct ScenarioResult {
  ScenarioConfig config;
  std::vector<SweepPoint> points;
  std::vector<CsvRow> rows;
  /// Ordered key/value summary lines, also written to the sidecar.
  std::vector<std::pair<std::string, std::string>> summary;
  double wall_seconds = 0.0;
  int threads = 1;
};

ScenarioResult run_self_eq(const ScenarioConfig& config, int threads);
ScenarioResult run_fse_vs_ppn(const ScenarioConfig& config, int threads);
ScenarioResult run_multiuser(const ScenarioConfig& config, int threads);
ScenarioResult run_custom(const ScenarioConfig& config, int threads);
/// Dispatches on config.scenario.
ScenarioResult run_scenario(const ScenarioConfig& config, int threads);

/// Where a run's outputs went.
struct RunRecord {
  std::filesystem::path csv_path;
  std::filesystem::path meta_path;
};

/// Writes <scenario>.csv and the <scenario>.meta.ini sidecar. The sidecar starts
/// with the full config, so it can be passed back to `run --config`.
RunRecord write_outputs(const ScenarioResult& result, const std::filesystem::path& out_dir);

/// FSE_SIM_THREADS overrides `requested`; 0 means hardware concurrency.
int resolve_threads(int requested);

std::string version_string();

}  // namespace fscmt
