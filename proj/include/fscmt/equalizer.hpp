#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fscmt/transceiver.hpp"

namespace fscmt {

/// Per-bin receive samples of all antennas: bins[i](a, n).
struct PerBinReceived {
  std::vector<Eigen::MatrixXcd> bins;

  int length() const { return static_cast<int>(bins.size()); }
  int antennas() const { return bins.empty() ? 0 : static_cast<int>(bins.front().rows()); }
  int symbols() const { return bins.empty() ? 0 : static_cast<int>(bins.front().cols()); }
  PerBinReceived first_antennas(int count) const;
};

/// Restacks per-antenna frames (each N x Ns) into per-bin Nr x Ns matrices.
PerBinReceived stack_antennas(std::span<const BinFrame> frames);

/// Per-bin MMSE combiners: weights[i] is Nr x M, column l serves user l.
struct EqualizerBank {
  std::vector<Eigen::MatrixXcd> weights;
};

/// Raised when H_i^H H_i + sigma^2 I is not positive definite.
class SingularBinError : public std::runtime_error {
 public:
  SingularBinError(int bin, const std::string& what) : std::runtime_error(what), bin_(bin) {}
  int bin() const { return bin_; }

 private:
  int bin_;
};

/// W = H (H^H H + sigma^2 I)^{-1}, via a Cholesky solve of the M x M system.
Eigen::MatrixXcd mmse_combiner(const Eigen::Ref<const Eigen::MatrixXcd>& channel,
                               double noise_variance);

/// mmse_combiner on every bin. Throws SingularBinError naming the bin.
EqualizerBank mmse_weights(std::span<const Eigen::MatrixXcd> channel, double noise_variance);

/// Equalized per-bin estimates: bins[i](u, n).
struct EqualizedBins {
  std::vector<Eigen::MatrixXcd> bins;

  int length() const { return static_cast<int>(bins.size()); }
  int users() const { return bins.empty() ? 0 : static_cast<int>(bins.front().rows()); }
  int symbols() const { return bins.empty() ? 0 : static_cast<int>(bins.front().cols()); }
};

/// r_hat_i = W_i^H r_tilde_i for every bin and symbol.
EqualizedBins equalize_bins(const PerBinReceived& received, const EqualizerBank& bank);

/// Despreads one symbol time: stacked (N x M) -> real (L x M).
Eigen::MatrixXd despread_users(const Eigen::Ref<const Eigen::MatrixXcd>& stacked,
                               const Waveform& waveform, long symbol_index);

/// Despreads every symbol time. Returns one L x Ns estimate per user.
std::vector<SymbolMatrix> despread_all(const EqualizedBins& equalized, const Waveform& waveform);

/// Baseline receiver with one complex tap per subcarrier and antenna: despread
/// each antenna first, then combine with the MMSE vector of the subcarrier's
/// center bin, then take the real part.
std::vector<SymbolMatrix> ppn_single_tap_receive(const PerBinReceived& received,
                                                 std::span<const Eigen::MatrixXcd> channel,
                                                 double noise_variance, const Waveform& waveform);

}  // namespace fscmt
