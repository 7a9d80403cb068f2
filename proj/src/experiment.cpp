#include "fscmt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fscmt/channel.hpp"
#include "fscmt/equalizer.hpp"

#ifndef FSCMT_VERSION
#define FSCMT_VERSION "unknown"
#endif

namespace fscmt {

std::string version_string() { return FSCMT_VERSION; }

namespace {

struct TrialOutput {
  // Indexed [antenna point][user].
  std::vector<std::vector<SirReport>> fse, ppn, theory;
};

struct TrialContext {
  const ScenarioConfig& config;
  const Waveform& waveform;
  const ChannelProfile& profile;
  SweepOptions options;
  double noise_variance;
};

std::vector<Eigen::MatrixXcd> first_rows(const std::vector<Eigen::MatrixXcd>& mats, int rows) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(mats.size());
  for (const auto& m : mats) out.push_back(m.topRows(rows));
  return out;
}

TrialOutput run_trial(const TrialContext& ctx, std::uint64_t trial) {
  const auto& cfg = ctx.config;
  const auto& wf = ctx.waveform;
  const int M = cfg.users;
  const int Ns = cfg.symbols_per_frame;
  const int edge = wf.edge_symbols();
  const int nr_max = cfg.max_antennas();

  Rng rng = trial_rng(cfg.master_seed, trial, static_cast<std::uint64_t>(wf.subcarriers()));

  std::vector<SymbolMatrix> sent;
  std::vector<TimeSignal> tx;
  for (int u = 0; u < M; ++u) {
    sent.push_back(random_symbols(wf.subcarriers(), Ns, cfg.alphabet, rng));
    tx.push_back(transmit(sent.back(), wf));
  }
  const ChannelRealization channel =
      draw_channels(ctx.profile, M, nr_max, wf.sample_rate_hz(), wf.length(), rng);
  const auto rx = apply_channel(tx, channel, ctx.noise_variance, rng);

  std::vector<BinFrame> frames;
  frames.reserve(rx.size());
  for (const auto& r : rx) frames.push_back(analyze_windows(r, Ns, 0, wf));
  const PerBinReceived all = stack_antennas(frames);

  TrialOutput out;
  for (int nr : cfg.antennas) {
    const PerBinReceived received = nr == nr_max ? all : all.first_antennas(nr);
    const auto H = nr == nr_max ? channel.freq : first_rows(channel.freq, nr);
    const EqualizerBank bank = mmse_weights(H, ctx.noise_variance);

    const auto estimates = despread_all(equalize_bins(received, bank), wf);
    auto& fse = out.fse.emplace_back();
    for (int u = 0; u < M; ++u) fse.push_back(measure_sir(sent[u], estimates[u], edge));

    auto& ppn = out.ppn.emplace_back();
    if (ctx.options.ppn) {
      const auto baseline = ppn_single_tap_receive(received, H, ctx.noise_variance, wf);
      for (int u = 0; u < M; ++u) ppn.push_back(measure_sir(sent[u], baseline[u], edge));
    }

    auto& theory = out.theory.emplace_back();
    if (ctx.options.theory) {
      const TheorySinr t = theoretical_sinr(H, bank, ctx.noise_variance, wf.spreading());
      for (int u = 0; u < M; ++u) theory.push_back(theory_report(t, u));
    }
  }
  return out;
}

// Runs `count` trials on up to `threads` workers; results land at their trial index.
std::vector<TrialOutput> run_trials(const TrialContext& ctx, int count, int threads) {
  std::vector<TrialOutput> results(count);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (int t = next++; t < count; t = next++) {
      try {
        results[t] = run_trial(ctx, static_cast<std::uint64_t>(t));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };

  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

// Merges per-trial reports in trial order.
std::vector<SirReport> reduce(const std::vector<TrialOutput>& trials, std::size_t point,
                              std::vector<std::vector<SirReport>> TrialOutput::*field,
                              Aggregation mode) {
  const auto& first = trials.front().*field;
  if (first[point].empty()) return {};
  std::vector<SirReport> out;
  for (std::size_t u = 0; u < first[point].size(); ++u) {
    std::vector<SirReport> per_user;
    per_user.reserve(trials.size());
    for (const auto& t : trials) per_user.push_back((t.*field)[point][u]);
    out.push_back(aggregate(per_user, mode));
  }
  return out;
}

std::string format_fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string metric_prefix(const ScenarioConfig& c) { return c.noise_free ? "sir_" : "sinr_"; }

void append_rows(std::vector<CsvRow>& rows, const ScenarioConfig& c, const SweepPoint& p,
                 const std::vector<SirReport>& reports, const std::string& metric) {
  for (std::size_t u = 0; u < reports.size(); ++u) {
    for (int m = 0; m < reports[u].subcarriers(); ++m) {
      CsvRow row;
      row.scenario = to_string(c.scenario);
      row.user = static_cast<int>(u);
      row.subcarrier = m;
      row.antennas = p.antennas;
      row.subcarriers = p.subcarriers;
      row.overlap = c.overlap;
      if (!c.noise_free) row.snr_in_db = c.snr_in_db;
      row.metric = metric;
      row.value_db = reports[u].value_db(m);
      row.trials = c.realizations;
      row.seed = c.master_seed;
      rows.push_back(std::move(row));
    }
  }
}

double mean_over_users(const std::vector<SirReport>& reports) {
  double acc = 0.0;
  for (const auto& r : reports) acc += r.mean_db();
  return acc / static_cast<double>(reports.size());
}

std::string point_key(const SweepPoint& p) {
  return "L" + std::to_string(p.subcarriers) + ".Nr" + std::to_string(p.antennas);
}

ScenarioResult assemble(const ScenarioConfig& config, SweepOptions options, int threads) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  result.config = config;
  result.threads = threads;
  result.points = run_sweep(config, options, threads);

  const std::string prefix = metric_prefix(config);
  for (int L : config.subcarriers)
    result.summary.emplace_back("subcarrier_width_hz.L" + std::to_string(L),
                                format_fixed(config.bandwidth_hz / L, 1));
  for (const auto& p : result.points) {
    append_rows(result.rows, config, p, p.fse, prefix + "fse");
    if (options.ppn) append_rows(result.rows, config, p, p.ppn, prefix + "ppn");
    if (options.theory) append_rows(result.rows, config, p, p.theory, prefix + "theory");

    const std::string key = point_key(p);
    const double fse_mean = mean_over_users(p.fse);
    result.summary.emplace_back(key + ".mean_" + prefix + "fse_db", format_fixed(fse_mean, 3));
    if (options.ppn) {
      const double ppn_mean = mean_over_users(p.ppn);
      result.summary.emplace_back(key + ".mean_" + prefix + "ppn_db", format_fixed(ppn_mean, 3));
      result.summary.emplace_back(key + ".mean_gap_db", format_fixed(fse_mean - ppn_mean, 3));
    }
    if (options.theory) {
      result.summary.emplace_back(key + ".mean_" + prefix + "theory_db",
                                  format_fixed(mean_over_users(p.theory), 3));
      double worst = 0.0;
      for (std::size_t u = 0; u < p.fse.size(); ++u)
        for (int m = 0; m < p.fse[u].subcarriers(); ++m)
          worst = std::max(worst, std::abs(p.fse[u].value_db(m) - p.theory[u].value_db(m)));
      result.summary.emplace_back(key + ".max_abs_sim_minus_theory_db", format_fixed(worst, 3));
      if (!config.noise_free)
        result.summary.emplace_back(
            key + ".snr_in_plus_array_gain_db",
            format_fixed(config.snr_in_db + 10.0 * std::log10(p.antennas), 3));
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void require_scenario(const ScenarioConfig& config, Scenario expected) {
  if (config.scenario != expected)
    throw ConfigError("scenario.name", "expected " + to_string(expected) + ", got " +
                                           to_string(config.scenario));
  validate(config);
}

}  // namespace

std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, SweepOptions options, int threads) {
  validate(config);
  const ChannelProfile profile = config.channel_profile();
  std::vector<SweepPoint> points;
  for (int L : config.subcarriers) {
    WaveformOptions wopts;
    wopts.time_phase = config.time_phase;
    wopts.sample_rate_hz = config.bandwidth_hz;
    const Waveform waveform(L, config.overlap, wopts);
    const TrialContext ctx{config, waveform, profile, options, config.noise_variance()};
    const auto trials = run_trials(ctx, config.realizations, threads);

    for (std::size_t p = 0; p < config.antennas.size(); ++p) {
      SweepPoint point;
      point.subcarriers = L;
      point.antennas = config.antennas[p];
      point.fse = reduce(trials, p, &TrialOutput::fse, config.aggregation);
      point.ppn = reduce(trials, p, &TrialOutput::ppn, config.aggregation);
      point.theory = reduce(trials, p, &TrialOutput::theory, config.aggregation);
      points.push_back(std::move(point));
    }
  }
  return points;
}

std::string csv_header() {
  return "scenario,user,subcarrier,Nr,L,K,SNR_in_db,metric,value_db,n_trials,seed";
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream out;
  out << csv_header() << "\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.user << ',' << r.subcarrier << ',' << r.antennas << ','
        << r.subcarriers << ',' << r.overlap << ','
        << (r.snr_in_db ? format_fixed(*r.snr_in_db, 2) : std::string("inf")) << ',' << r.metric
        << ',' << format_fixed(r.value_db) << ',' << r.trials << ',' << r.seed << "\n";
  }
  return out.str();
}

ScenarioResult run_self_eq(const ScenarioConfig& config, int threads) {
  require_scenario(config, Scenario::self_eq_sir);
  return assemble(config, {}, threads);
}

ScenarioResult run_fse_vs_ppn(const ScenarioConfig& config, int threads) {
  require_scenario(config, Scenario::fse_vs_ppn);
  return assemble(config, {.ppn = true}, threads);
}

ScenarioResult run_multiuser(const ScenarioConfig& config, int threads) {
  require_scenario(config, Scenario::multiuser_theory_vs_sim);
  return assemble(config, {.theory = true}, threads);
}

ScenarioResult run_custom(const ScenarioConfig& config, int threads) {
  require_scenario(config, Scenario::custom);
  return assemble(config, {.ppn = config.ppn, .theory = config.theory}, threads);
}

ScenarioResult run_scenario(const ScenarioConfig& config, int threads) {
  switch (config.scenario) {
    case Scenario::self_eq_sir: return run_self_eq(config, threads);
    case Scenario::fse_vs_ppn: return run_fse_vs_ppn(config, threads);
    case Scenario::multiuser_theory_vs_sim: return run_multiuser(config, threads);
    case Scenario::custom: return run_custom(config, threads);
  }
  throw ConfigError("scenario.name", "unhandled scenario");
}

RunRecord write_outputs(const ScenarioResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string stem = to_string(result.config.scenario);
  RunRecord record{out_dir / (stem + ".csv"), out_dir / (stem + ".meta.ini")};

  {
    std::ofstream csv(record.csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + record.csv_path.string());
    csv << to_csv(result.rows);
  }

  std::ofstream meta(record.meta_path, std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write " + record.meta_path.string());
  meta << to_ini(result.config) << "\n[record]\n"
       << "code_version = " << version_string() << "\n"
       << "wall_seconds = " << format_fixed(result.wall_seconds, 3) << "\n"
       << "threads = " << result.threads << "\n"
       << "csv = " << record.csv_path.filename().string() << "\n"
       << "phase_convention = "
       << (result.config.time_phase ? "j^(subcarrier+symbol)" : "j^subcarrier") << "\n"
       << "pulse_origin = window_center\n"
       << "dft_convention = forward_unnormalized_inverse_1_over_N\n";
  for (int L : result.config.subcarriers) {
    const double tx_gain = std::sqrt(L / 2.0);
    const double energy = design_coeffs(result.config.overlap).energy();
    meta << "tx_gain.L" << L << " = " << format_fixed(tx_gain, 12) << "\n"
         << "round_trip_gain.L" << L << " = " << format_fixed(tx_gain * energy, 12) << "\n";
  }
  meta << "\n[summary]\n";
  for (const auto& [k, v] : result.summary) meta << k << " = " << v << "\n";
  return record;
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("FSE_SIM_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0) requested = static_cast<int>(v);
  }
  if (requested <= 0) requested = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return requested;
}

}  // namespace fscmt
