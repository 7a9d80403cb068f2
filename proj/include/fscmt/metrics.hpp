#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fscmt/equalizer.hpp"
#include "fscmt/filterbank.hpp"
#include "fscmt/transceiver.hpp"

namespace fscmt {

enum class Aggregation {
  power,  ///< sum signal and error powers over realizations, then take the ratio
  db,     ///< average the per-realization dB values
};

Aggregation parse_aggregation(const std::string& name);
std::string to_string(Aggregation mode);

inline constexpr double kDefaultCeilingDb = 120.0;

/// Additive per-subcarrier accumulators. Merging is a commutative monoid as long
/// as the same order is used for floating-point sums.
struct SubcarrierStats {
  double signal_power = 0.0;
  double error_power = 0.0;
  double db_sum = 0.0;
  std::size_t symbols = 0;
  std::size_t realizations = 0;
  std::size_t saturated = 0;
};

/// Per-subcarrier SIR/SINR of one user.
class SirReport {
 public:
  explicit SirReport(int subcarriers = 0, double ceiling_db = kDefaultCeilingDb);

  int subcarriers() const { return static_cast<int>(stats_.size()); }
  double ceiling_db() const { return ceiling_db_; }
  Aggregation mode() const { return mode_; }
  void set_mode(Aggregation mode) { mode_ = mode; }

  const SubcarrierStats& stats(int m) const { return stats_.at(m); }
  SubcarrierStats& stats(int m) { return stats_.at(m); }

  double value_db(int m) const;
  std::vector<double> values_db() const;
  double mean_db() const;
  /// True when the reported value sits at the ceiling.
  bool saturated(int m) const;

  void merge(const SirReport& other);

 private:
  std::vector<SubcarrierStats> stats_;
  double ceiling_db_;
  Aggregation mode_ = Aggregation::power;
};

/// SIR_m = E[s_m^2] / E[(s_hat_m / a_m - s_m)^2] over the symbols between the
/// `edge` leading and trailing columns, with a_m the least-squares gain.
SirReport measure_sir(const SymbolMatrix& sent, const SymbolMatrix& estimated, int edge,
                      double ceiling_db = kDefaultCeilingDb);

/// Merges reports; the result reports in `mode`. Throws on empty input.
SirReport aggregate(std::span<const SirReport> reports, Aggregation mode);

/// Closed-form per-user, per-subcarrier signal and interference-plus-noise powers.
struct TheorySinr {
  Eigen::MatrixXd signal;        // M x L
  Eigen::MatrixXd interference;  // M x L

  double sinr(int user, int subcarrier) const;
  double sinr_db(int user, int subcarrier) const;
};

/// P_s = sum_k c_k^2 Re{w^H h_l}^2 and
/// P_I = sum_k c_k^2 [sum_{m!=l} Re{w^H h_m}^2 + sum_m Im{w^H h_m}^2 + sigma^2 ||w||^2],
/// with w = W_i(:, l), h_m = H_i(:, m) at bins i = (subcarrier * K + k) mod N.
TheorySinr theoretical_sinr(std::span<const Eigen::MatrixXcd> channel, const EqualizerBank& bank,
                            double noise_variance, const SpreadingMatrix& spreading);

/// As above, computing the MMSE weights from the channel.
TheorySinr theoretical_sinr(std::span<const Eigen::MatrixXcd> channel, double noise_variance,
                            const SpreadingMatrix& spreading);

/// One realization of theory for one user, in SirReport form: unit signal and
/// error P_I / P_s, so power aggregation gives 1 / mean(P_I / P_s).
SirReport theory_report(const TheorySinr& theory, int user, double ceiling_db = kDefaultCeilingDb);

}  // namespace fscmt
