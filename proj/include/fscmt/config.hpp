#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fscmt/channel.hpp"
#include "fscmt/metrics.hpp"
#include "fscmt/transceiver.hpp"

namespace fscmt {

enum class Scenario { self_eq_sir, fse_vs_ppn, multiuser_theory_vs_sim, custom };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario scenario);

/// Bad or inconsistent configuration; field() is "section.key".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ChannelSpec {
  std::string profile = "sui4";  // sui4 | flat | custom
  std::vector<double> delays_us;
  std::vector<double> powers_db;
};

/// Everything needed to reproduce one scenario run.
struct ScenarioConfig {
  Scenario scenario = Scenario::custom;
  int users = 1;                                    // M
  std::vector<int> subcarriers{16};                 // L values
  int overlap = 4;                                  // K
  std::vector<int> antennas{1, 2, 4, 8, 16, 32, 64, 128};  // Nr values
  double bandwidth_hz = 2.8e6;
  int symbols_per_frame = 64;
  Alphabet alphabet = Alphabet::pam2;
  bool time_phase = true;
  ChannelSpec channel;
  bool noise_free = true;
  double snr_in_db = -1.0;
  int realizations = 200;
  std::uint64_t master_seed = 1;
  Aggregation aggregation = Aggregation::power;
  bool ppn = false;     // custom only: also run the single-tap baseline
  bool theory = false;  // custom only: also evaluate the closed-form SINR
  int threads = 0;      // 0: hardware concurrency
  std::string out_dir = "results";

  ChannelProfile channel_profile() const;
  double noise_variance() const;
  int max_antennas() const;
};

/// Parses the INI-style key-value format ([scenario], [waveform], [channel],
/// [noise], [run]). Sections [record] and [summary] are skipped, and a run
/// metadata file loads as a config. Throws ConfigError.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

/// Serializes to the format parse_config reads; parse(to_ini(c)) == c.
std::string to_ini(const ScenarioConfig& config);

/// Defaults for the named scenario.
ScenarioConfig default_config(Scenario scenario);

}  // namespace fscmt
