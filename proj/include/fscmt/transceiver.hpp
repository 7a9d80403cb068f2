#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fscmt/dft.hpp"
#include "fscmt/filterbank.hpp"
#include "fscmt/random.hpp"

namespace fscmt {

struct WaveformOptions {
  /// Multiply s(n) by j^n so that symbol (m, n) carries phase j^(m+n).
  bool time_phase = true;
  /// Scale the transmitter so unit-power symbols give unit average sample power.
  bool unit_power = true;
  double sample_rate_hz = 2.8e6;
};

/// Immutable FS-CMT assets shared by transmitter and receivers.
class Waveform {
 public:
  Waveform(int subcarriers, int overlap, WaveformOptions options = {});

  int subcarriers() const { return subcarriers_; }
  int overlap() const { return overlap_; }
  int length() const { return length_; }
  /// Symbol advance L/2.
  int hop() const { return subcarriers_ / 2; }
  int edge_symbols() const { return overlap_ - 1; }
  double sample_rate_hz() const { return options_.sample_rate_hz; }
  bool time_phase() const { return options_.time_phase; }
  const WaveformOptions& options() const { return options_; }

  const FreqCoeffs& coeffs() const { return spreading_.coeffs(); }
  const SpreadingMatrix& spreading() const { return spreading_; }
  const PhaseMatrix& phase() const { return phase_; }
  const PrototypeFilter& prototype() const { return prototype_; }
  const Dft& dft() const { return dft_; }

  double tx_gain() const { return tx_gain_; }
  /// Gain of modulate -> analyze -> despread on a single symbol: tx_gain * sum c_k^2.
  double round_trip_gain() const { return tx_gain_ * coeffs().energy(); }

  /// Phase carried by subcarrier m at symbol time n.
  cplx symbol_phase(int subcarrier, long symbol_index) const;
  /// (Ns-1) L/2 + N.
  std::size_t signal_length(std::size_t symbols) const;

 private:
  int subcarriers_;
  int overlap_;
  int length_;
  WaveformOptions options_;
  SpreadingMatrix spreading_;
  PhaseMatrix phase_;
  PrototypeFilter prototype_;
  Dft dft_;
  double tx_gain_;
};

/// Real PAM symbols, rows = subcarriers, columns = symbol times.
using SymbolMatrix = Eigen::MatrixXd;

struct TimeSignal {
  Eigen::VectorXcd samples;
  double sample_rate_hz = 0.0;
};

/// DFT outputs of consecutive symbol windows of one antenna.
struct BinFrame {
  Eigen::MatrixXcd bins;  // N x Ns
  std::vector<long> window_offsets;
};

enum class Alphabet { pam2, pam4 };

/// Unit average power PAM symbols.
SymbolMatrix random_symbols(int subcarriers, int symbols, Alphabet alphabet, Rng& rng);

/// One N-sample FS-CMT symbol: IDFT of the spread, phase-adjusted vector, with the
/// pulse centered in the window and the transmit gain applied.
Eigen::VectorXcd modulate_symbol(const Eigen::Ref<const Eigen::VectorXd>& symbol,
                                 const Waveform& waveform, long symbol_index = 0);

/// Superposes N-sample symbols at spacing hop. Throws on empty input.
TimeSignal overlap_add(std::span<const Eigen::VectorXcd> symbols, int hop, double sample_rate_hz);

/// modulate_symbol on every column followed by overlap_add.
TimeSignal transmit(const SymbolMatrix& symbols, const Waveform& waveform);

/// Column n = N-point DFT of samples [first_offset + n L/2, +N), time origin at
/// the window center. Samples past the end of the signal read as zero.
BinFrame analyze_windows(const TimeSignal& signal, int symbols, long first_offset,
                         const Waveform& waveform);

/// Phi^{-1} A^T y / round_trip_gain, before the real part is taken.
Eigen::VectorXcd despread(const Eigen::Ref<const Eigen::VectorXcd>& bins,
                          const Waveform& waveform, long symbol_index = 0);

/// Re{despread(...)}.
Eigen::VectorXd demodulate_ideal(const Eigen::Ref<const Eigen::VectorXcd>& bins,
                                 const Waveform& waveform, long symbol_index = 0);

/// demodulate_ideal over every column of a frame.
SymbolMatrix demodulate_frame(const BinFrame& frame, const Waveform& waveform);

}  // namespace fscmt
