#include "fscmt/equalizer.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace fscmt {

PerBinReceived PerBinReceived::first_antennas(int count) const {
  if (count < 1 || count > antennas())
    throw std::invalid_argument("first_antennas: count out of range");
  PerBinReceived out;
  out.bins.reserve(bins.size());
  for (const auto& b : bins) out.bins.push_back(b.topRows(count));
  return out;
}

PerBinReceived stack_antennas(std::span<const BinFrame> frames) {
  if (frames.empty()) throw std::invalid_argument("stack_antennas: no antennas");
  const Eigen::Index N = frames.front().bins.rows();
  const Eigen::Index Ns = frames.front().bins.cols();
  const Eigen::Index Nr = static_cast<Eigen::Index>(frames.size());
  PerBinReceived out;
  out.bins.assign(N, Eigen::MatrixXcd(Nr, Ns));
  for (Eigen::Index a = 0; a < Nr; ++a) {
    const auto& f = frames[a].bins;
    if (f.rows() != N || f.cols() != Ns)
      throw std::invalid_argument("stack_antennas: antenna frames differ in shape");
    for (Eigen::Index i = 0; i < N; ++i) out.bins[i].row(a) = f.row(i);
  }
  return out;
}

Eigen::MatrixXcd mmse_combiner(const Eigen::Ref<const Eigen::MatrixXcd>& channel,
                               double noise_variance) {
  if (noise_variance < 0.0) throw std::invalid_argument("mmse_combiner: negative noise variance");
  const Eigen::Index M = channel.cols();
  Eigen::MatrixXcd gram = channel.adjoint() * channel;
  gram.diagonal().array() += noise_variance;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success || !llt.matrixLLT().allFinite())
    throw std::runtime_error("mmse_combiner: H^H H + sigma^2 I is not positive definite");
  const Eigen::VectorXd diag = llt.matrixLLT().diagonal().real();
  const double scale = std::sqrt(gram.diagonal().real().maxCoeff());
  if (M > 0 && !(diag.minCoeff() > 1e-6 * scale))
    throw std::runtime_error("mmse_combiner: H^H H + sigma^2 I is singular");
  // gram is Hermitian, so W = H gram^{-1} = (gram^{-1} H^H)^H.
  return llt.solve(channel.adjoint()).adjoint();
}

EqualizerBank mmse_weights(std::span<const Eigen::MatrixXcd> channel, double noise_variance) {
  EqualizerBank bank;
  bank.weights.reserve(channel.size());
  for (std::size_t i = 0; i < channel.size(); ++i) {
    if (!channel[i].allFinite())
      throw std::invalid_argument("mmse_weights: non-finite channel at bin " + std::to_string(i));
    try {
      bank.weights.push_back(mmse_combiner(channel[i], noise_variance));
    } catch (const std::runtime_error& e) {
      throw SingularBinError(static_cast<int>(i), std::string("mmse_weights: bin ") +
                                                      std::to_string(i) + ": " + e.what());
    }
  }
  return bank;
}

EqualizedBins equalize_bins(const PerBinReceived& received, const EqualizerBank& bank) {
  if (received.bins.size() != bank.weights.size())
    throw std::invalid_argument("equalize_bins: bin count mismatch");
  EqualizedBins out;
  out.bins.resize(received.bins.size());
  for (std::size_t i = 0; i < received.bins.size(); ++i) {
    if (bank.weights[i].rows() != received.bins[i].rows())
      throw std::invalid_argument("equalize_bins: antenna count mismatch at bin " +
                                  std::to_string(i));
    out.bins[i].noalias() = bank.weights[i].adjoint() * received.bins[i];
  }
  return out;
}

Eigen::MatrixXd despread_users(const Eigen::Ref<const Eigen::MatrixXcd>& stacked,
                               const Waveform& waveform, long symbol_index) {
  if (stacked.rows() != waveform.length())
    throw std::invalid_argument("despread_users: expected N rows");
  Eigen::MatrixXd out(waveform.subcarriers(), stacked.cols());
  for (Eigen::Index u = 0; u < stacked.cols(); ++u)
    out.col(u) = demodulate_ideal(stacked.col(u), waveform, symbol_index);
  return out;
}

std::vector<SymbolMatrix> despread_all(const EqualizedBins& equalized, const Waveform& waveform) {
  if (equalized.length() != waveform.length())
    throw std::invalid_argument("despread_all: expected N bins");
  const int M = equalized.users();
  const int Ns = equalized.symbols();
  const int N = waveform.length();
  std::vector<SymbolMatrix> out(M, SymbolMatrix(waveform.subcarriers(), Ns));
  Eigen::VectorXcd column(N);
  for (int u = 0; u < M; ++u) {
    for (int n = 0; n < Ns; ++n) {
      for (int i = 0; i < N; ++i) column[i] = equalized.bins[i](u, n);
      out[u].col(n) = demodulate_ideal(column, waveform, n);
    }
  }
  return out;
}

std::vector<SymbolMatrix> ppn_single_tap_receive(const PerBinReceived& received,
                                                 std::span<const Eigen::MatrixXcd> channel,
                                                 double noise_variance, const Waveform& waveform) {
  const int N = waveform.length();
  const int L = waveform.subcarriers();
  if (received.length() != N || static_cast<int>(channel.size()) != N)
    throw std::invalid_argument("ppn_single_tap_receive: expected N bins");
  const int Nr = received.antennas();
  const int Ns = received.symbols();
  const int M = static_cast<int>(channel.front().cols());

  std::vector<Eigen::MatrixXcd> taps(L);
  for (int m = 0; m < L; ++m) {
    const int center = waveform.spreading().center_bin(m);
    if (channel[center].rows() != Nr)
      throw std::invalid_argument("ppn_single_tap_receive: antenna count mismatch");
    try {
      taps[m] = mmse_combiner(channel[center], noise_variance);
    } catch (const std::runtime_error& e) {
      throw SingularBinError(center, std::string("ppn_single_tap_receive: bin ") +
                                         std::to_string(center) + ": " + e.what());
    }
  }

  std::vector<SymbolMatrix> out(M, SymbolMatrix(L, Ns));
  Eigen::MatrixXcd per_antenna(Nr, L);
  Eigen::VectorXcd column(N);
  for (int n = 0; n < Ns; ++n) {
    for (int a = 0; a < Nr; ++a) {
      for (int i = 0; i < N; ++i) column[i] = received.bins[i](a, n);
      per_antenna.row(a) = despread(column, waveform, n).transpose();
    }
    for (int m = 0; m < L; ++m) {
      const Eigen::VectorXcd combined = taps[m].adjoint() * per_antenna.col(m);
      for (int u = 0; u < M; ++u) out[u](m, n) = combined[u].real();
    }
  }
  return out;
}

}  // namespace fscmt
