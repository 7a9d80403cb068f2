#include "fscmt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fscmt {

Aggregation parse_aggregation(const std::string& name) {
  if (name == "power") return Aggregation::power;
  if (name == "db") return Aggregation::db;
  throw std::invalid_argument("unknown aggregation mode '" + name + "' (expected power or db)");
}

std::string to_string(Aggregation mode) { return mode == Aggregation::power ? "power" : "db"; }

namespace {

// Adds one realization's signal/error totals to a subcarrier accumulator.
void record(SubcarrierStats& st, double signal, double error, std::size_t symbols,
            double ceiling_db) {
  const double floor_ratio = std::pow(10.0, -ceiling_db / 10.0);
  st.signal_power += signal;
  st.symbols += symbols;
  st.realizations += 1;
  if (error == 0.0 || (signal > 0.0 && error / signal < floor_ratio)) {
    st.saturated += 1;
    st.db_sum += ceiling_db;
    return;
  }
  st.error_power += error;
  st.db_sum += signal > 0.0 ? std::max(-ceiling_db, 10.0 * std::log10(signal / error)) : -ceiling_db;
}

}  // namespace

SirReport::SirReport(int subcarriers, double ceiling_db)
    : stats_(static_cast<std::size_t>(std::max(subcarriers, 0))), ceiling_db_(ceiling_db) {}

double SirReport::value_db(int m) const {
  const auto& st = stats_.at(m);
  if (st.realizations == 0) return std::numeric_limits<double>::quiet_NaN();
  if (mode_ == Aggregation::db) return st.db_sum / static_cast<double>(st.realizations);
  if (st.error_power == 0.0) return ceiling_db_;
  if (st.signal_power == 0.0) return -ceiling_db_;
  return std::clamp(10.0 * std::log10(st.signal_power / st.error_power), -ceiling_db_,
                    ceiling_db_);
}

std::vector<double> SirReport::values_db() const {
  std::vector<double> out(stats_.size());
  for (std::size_t m = 0; m < stats_.size(); ++m) out[m] = value_db(static_cast<int>(m));
  return out;
}

double SirReport::mean_db() const {
  if (stats_.empty()) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (int m = 0; m < subcarriers(); ++m) acc += value_db(m);
  return acc / subcarriers();
}

bool SirReport::saturated(int m) const { return value_db(m) >= ceiling_db_; }

void SirReport::merge(const SirReport& other) {
  if (other.subcarriers() != subcarriers())
    throw std::invalid_argument("SirReport::merge: subcarrier count mismatch");
  for (std::size_t m = 0; m < stats_.size(); ++m) {
    auto& a = stats_[m];
    const auto& b = other.stats_[m];
    a.signal_power += b.signal_power;
    a.error_power += b.error_power;
    a.db_sum += b.db_sum;
    a.symbols += b.symbols;
    a.realizations += b.realizations;
    a.saturated += b.saturated;
  }
}

SirReport measure_sir(const SymbolMatrix& sent, const SymbolMatrix& estimated, int edge,
                      double ceiling_db) {
  if (sent.rows() != estimated.rows() || sent.cols() != estimated.cols())
    throw std::invalid_argument("measure_sir: sent and estimated differ in shape");
  if (edge < 0 || 2 * static_cast<Eigen::Index>(edge) >= sent.cols())
    throw std::invalid_argument("measure_sir: no symbols left after excluding edges");
  const Eigen::Index first = edge;
  const Eigen::Index count = sent.cols() - 2 * edge;

  SirReport report(static_cast<int>(sent.rows()), ceiling_db);
  for (Eigen::Index m = 0; m < sent.rows(); ++m) {
    const auto s = sent.row(m).segment(first, count);
    const auto e = estimated.row(m).segment(first, count);
    const double ss = s.squaredNorm();
    const double gain = ss > 0.0 ? s.dot(e) / ss : 0.0;
    double error;
    if (gain == 0.0) {
      error = std::numeric_limits<double>::infinity();
    } else {
      error = (e - gain * s).squaredNorm() / (gain * gain);
    }
    if (!std::isfinite(error)) error = ss * std::pow(10.0, ceiling_db / 10.0);
    record(report.stats(static_cast<int>(m)), ss, error, static_cast<std::size_t>(count),
           ceiling_db);
  }
  return report;
}

SirReport aggregate(std::span<const SirReport> reports, Aggregation mode) {
  if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
  SirReport out(reports.front().subcarriers(), reports.front().ceiling_db());
  for (const auto& r : reports) out.merge(r);
  out.set_mode(mode);
  return out;
}

double TheorySinr::sinr(int user, int subcarrier) const {
  const double ps = signal(user, subcarrier);
  const double pi = interference(user, subcarrier);
  if (pi == 0.0) return ps > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return ps / pi;
}

double TheorySinr::sinr_db(int user, int subcarrier) const {
  return 10.0 * std::log10(sinr(user, subcarrier));
}

TheorySinr theoretical_sinr(std::span<const Eigen::MatrixXcd> channel, const EqualizerBank& bank,
                            double noise_variance, const SpreadingMatrix& spreading) {
  const int N = spreading.rows();
  const int L = spreading.cols();
  const int K = spreading.coeffs().overlap();
  if (static_cast<int>(channel.size()) != N || static_cast<int>(bank.weights.size()) != N)
    throw std::invalid_argument("theoretical_sinr: expected N bins");
  const int M = static_cast<int>(channel.front().cols());

  TheorySinr out{Eigen::MatrixXd::Zero(M, L), Eigen::MatrixXd::Zero(M, L)};
  for (int m = 0; m < L; ++m) {
    for (int k = -K + 1; k < K; ++k) {
      const int i = spreading.bin(m, k);
      const double c2 = spreading.coeffs()(k) * spreading.coeffs()(k);
      const auto& W = bank.weights[i];
      const auto& H = channel[i];
      if (W.rows() != H.rows() || W.cols() != M)
        throw std::invalid_argument("theoretical_sinr: weights and channel differ in shape");
      // gains(l, q) = w_l^H h_q; its real part equals w_Re^T h_Re + w_Im^T h_Im.
      const Eigen::MatrixXcd gains = W.adjoint() * H;
      for (int l = 0; l < M; ++l) {
        double leak = 0.0;
        for (int q = 0; q < M; ++q) {
          const double re = gains(l, q).real();
          const double im = gains(l, q).imag();
          if (q != l) leak += re * re;
          leak += im * im;
        }
        const double own = gains(l, l).real();
        out.signal(l, m) += c2 * own * own;
        out.interference(l, m) += c2 * (leak + noise_variance * W.col(l).squaredNorm());
      }
    }
  }
  return out;
}

TheorySinr theoretical_sinr(std::span<const Eigen::MatrixXcd> channel, double noise_variance,
                            const SpreadingMatrix& spreading) {
  return theoretical_sinr(channel, mmse_weights(channel, noise_variance), noise_variance, spreading);
}

SirReport theory_report(const TheorySinr& theory, int user, double ceiling_db) {
  const int L = static_cast<int>(theory.signal.cols());
  SirReport report(L, ceiling_db);
  for (int m = 0; m < L; ++m) {
    const double ps = theory.signal(user, m);
    const double pi = theory.interference(user, m);
    const double error = ps > 0.0 ? pi / ps : std::pow(10.0, ceiling_db / 10.0);
    record(report.stats(m), 1.0, error, 0, ceiling_db);
  }
  return report;
}

}  // namespace fscmt
