#include "fscmt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fscmt {

namespace pt = boost::property_tree;

Scenario parse_scenario(const std::string& name) {
  if (name == "self_eq_sir") return Scenario::self_eq_sir;
  if (name == "fse_vs_ppn") return Scenario::fse_vs_ppn;
  if (name == "multiuser_theory_vs_sim") return Scenario::multiuser_theory_vs_sim;
  if (name == "custom") return Scenario::custom;
  throw ConfigError("scenario.name", "unknown scenario '" + name +
                                         "' (expected self_eq_sir, fse_vs_ppn, "
                                         "multiuser_theory_vs_sim or custom)");
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::self_eq_sir: return "self_eq_sir";
    case Scenario::fse_vs_ppn: return "fse_vs_ppn";
    case Scenario::multiuser_theory_vs_sim: return "multiuser_theory_vs_sim";
    case Scenario::custom: return "custom";
  }
  return "custom";
}

ChannelProfile ScenarioConfig::channel_profile() const {
  if (channel.profile == "sui4") return sui4_profile();
  if (channel.profile == "flat") return flat_profile();
  if (channel.profile == "custom") {
    try {
      return make_profile("custom", channel.delays_us, channel.powers_db);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("channel.delays_us", e.what());
    }
  }
  throw ConfigError("channel.profile",
                    "unknown profile '" + channel.profile + "' (expected sui4, flat or custom)");
}

double ScenarioConfig::noise_variance() const {
  return noise_free ? 0.0 : noise_variance_for_snr_db(snr_in_db);
}

int ScenarioConfig::max_antennas() const {
  return antennas.empty() ? 0 : *std::max_element(antennas.begin(), antennas.end());
}

ScenarioConfig default_config(Scenario scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case Scenario::self_eq_sir:
      c.subcarriers = {8, 16, 32};
      break;
    case Scenario::fse_vs_ppn:
      break;
    case Scenario::multiuser_theory_vs_sim:
      c.users = 6;
      c.noise_free = false;
      c.snr_in_db = -1.0;
      c.antennas = {64, 128};
      break;
    case Scenario::custom:
      break;
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError(field, "cannot parse '" + text + "' as a number");
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& field, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(field, item));
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

bool parse_bool(const std::string& field, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(field, "cannot parse '" + text + "' as a boolean");
}

Alphabet parse_alphabet(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "pam2") return Alphabet::pam2;
  if (t == "pam4") return Alphabet::pam4;
  throw ConfigError(field, "unknown alphabet '" + text + "' (expected pam2 or pam4)");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

using Setter = void (*)(ScenarioConfig&, const std::string& field, const std::string& value);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.name", [](ScenarioConfig&, const std::string&, const std::string&) {}},
      {"scenario.M",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.users = parse_number<int>(f, v);
       }},
      {"waveform.L",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.subcarriers = parse_list<int>(f, v);
       }},
      {"waveform.K",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.overlap = parse_number<int>(f, v);
       }},
      {"waveform.bandwidth_hz",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.bandwidth_hz = parse_number<double>(f, v);
       }},
      {"waveform.n_symbols_per_frame",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.symbols_per_frame = parse_number<int>(f, v);
       }},
      {"waveform.alphabet",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.alphabet = parse_alphabet(f, v);
       }},
      {"waveform.phase_toggle",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.time_phase = parse_bool(f, v);
       }},
      {"channel.profile",
       [](ScenarioConfig& c, const std::string&, const std::string& v) {
         c.channel.profile = trim(v);
       }},
      {"channel.delays_us",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.channel.delays_us = parse_list<double>(f, v);
       }},
      {"channel.powers_db",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.channel.powers_db = parse_list<double>(f, v);
       }},
      {"noise.noise_free",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.noise_free = parse_bool(f, v);
       }},
      {"noise.snr_in_db",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.snr_in_db = parse_number<double>(f, v);
       }},
      {"run.Nr_list",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.antennas = parse_list<int>(f, v);
       }},
      {"run.n_realizations",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.realizations = parse_number<int>(f, v);
       }},
      {"run.master_seed",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.master_seed = parse_number<std::uint64_t>(f, v);
       }},
      {"run.aggregation_mode",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         try {
           c.aggregation = parse_aggregation(trim(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(f, e.what());
         }
       }},
      {"run.ppn",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.ppn = parse_bool(f, v);
       }},
      {"run.theory",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.theory = parse_bool(f, v);
       }},
      {"run.threads",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         c.threads = parse_number<int>(f, v);
       }},
      {"run.out_dir",
       [](ScenarioConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); }},
  };
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  const auto name = tree.get_optional<std::string>("scenario.name");
  if (!name) throw ConfigError("scenario.name", "missing");
  ScenarioConfig config = default_config(parse_scenario(trim(*name)));

  static const std::set<std::string> ignored_sections = {"record", "summary"};
  for (const auto& [section, keys] : tree) {
    if (ignored_sections.count(section)) continue;
    if (keys.empty() && !keys.data().empty())
      throw ConfigError(section, "key outside of any section");
    for (const auto& [key, value] : keys) {
      const std::string field = section + "." + key;
      const auto it = setters().find(field);
      if (it == setters().end()) throw ConfigError(field, "unknown key");
      it->second(config, field, value.data());
    }
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  return parse_config(in);
}

void validate(const ScenarioConfig& c) {
  auto require = [](bool ok, const char* field, const std::string& msg) {
    if (!ok) throw ConfigError(field, msg);
  };
  require(c.users >= 1, "scenario.M", "must be >= 1 (got " + std::to_string(c.users) + ")");
  require(!c.subcarriers.empty(), "waveform.L", "must list at least one value");
  for (int L : c.subcarriers) {
    require(L >= 2, "waveform.L", "must be >= 2 (got " + std::to_string(L) + ")");
    require(L % 2 == 0, "waveform.L", "must be even (got " + std::to_string(L) + ")");
  }
  require(c.overlap >= 2 && c.overlap <= 4, "waveform.K",
          "unsupported overlapping factor " + std::to_string(c.overlap) + " (supported: 2, 3, 4)");
  require(std::isfinite(c.bandwidth_hz) && c.bandwidth_hz > 0.0, "waveform.bandwidth_hz",
          "must be positive");
  require(c.symbols_per_frame > 2 * (c.overlap - 1), "waveform.n_symbols_per_frame",
          "must exceed the 2(K-1) edge symbols (got " + std::to_string(c.symbols_per_frame) + ")");
  require(!c.antennas.empty(), "run.Nr_list", "must list at least one value");
  for (int nr : c.antennas)
    require(nr >= 1, "run.Nr_list", "antenna counts must be >= 1 (got " + std::to_string(nr) + ")");
  require(c.realizations >= 1, "run.n_realizations", "must be >= 1");
  require(c.threads >= 0, "run.threads", "must be >= 0");
  require(c.noise_free || std::isfinite(c.snr_in_db), "noise.snr_in_db", "must be finite");
  c.channel_profile();  // throws ConfigError on a bad profile

  if (c.noise_free)
    for (int nr : c.antennas)
      require(nr >= c.users, "run.Nr_list",
              "noise-free MMSE needs Nr >= M (got Nr=" + std::to_string(nr) + ")");

  switch (c.scenario) {
    case Scenario::self_eq_sir:
      require(c.users == 1, "scenario.M", "self_eq_sir is single-user (M = 1)");
      require(c.noise_free, "noise.noise_free", "self_eq_sir is noise-free");
      break;
    case Scenario::fse_vs_ppn:
      require(c.users == 1, "scenario.M", "fse_vs_ppn is single-user (M = 1)");
      break;
    case Scenario::multiuser_theory_vs_sim: {
      require(c.users == 6, "scenario.M", "multiuser_theory_vs_sim uses M = 6");
      require(!c.noise_free, "noise.noise_free", "multiuser_theory_vs_sim needs noise");
      require(c.snr_in_db == -1.0, "noise.snr_in_db", "multiuser_theory_vs_sim uses SNR_in = -1 dB");
      const auto has = [&](int v) {
        return std::find(c.antennas.begin(), c.antennas.end(), v) != c.antennas.end();
      };
      require(has(64) && has(128), "run.Nr_list", "multiuser_theory_vs_sim needs Nr 64 and 128");
      break;
    }
    case Scenario::custom:
      break;
  }
}

std::string to_ini(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "[scenario]\n"
      << "name = " << to_string(c.scenario) << "\n"
      << "M = " << c.users << "\n\n"
      << "[waveform]\n"
      << "L = " << join(c.subcarriers) << "\n"
      << "K = " << c.overlap << "\n"
      << "bandwidth_hz = " << format_double(c.bandwidth_hz) << "\n"
      << "n_symbols_per_frame = " << c.symbols_per_frame << "\n"
      << "alphabet = " << (c.alphabet == Alphabet::pam2 ? "pam2" : "pam4") << "\n"
      << "phase_toggle = " << (c.time_phase ? "true" : "false") << "\n\n"
      << "[channel]\n"
      << "profile = " << c.channel.profile << "\n";
  if (!c.channel.delays_us.empty()) out << "delays_us = " << join(c.channel.delays_us) << "\n";
  if (!c.channel.powers_db.empty()) out << "powers_db = " << join(c.channel.powers_db) << "\n";
  out << "\n[noise]\n"
      << "noise_free = " << (c.noise_free ? "true" : "false") << "\n"
      << "snr_in_db = " << format_double(c.snr_in_db) << "\n\n"
      << "[run]\n"
      << "Nr_list = " << join(c.antennas) << "\n"
      << "n_realizations = " << c.realizations << "\n"
      << "master_seed = " << c.master_seed << "\n"
      << "aggregation_mode = " << to_string(c.aggregation) << "\n"
      << "ppn = " << (c.ppn ? "true" : "false") << "\n"
      << "theory = " << (c.theory ? "true" : "false") << "\n"
      << "threads = " << c.threads << "\n"
      << "out_dir = " << c.out_dir << "\n";
  return out.str();
}

}  // namespace fscmt
