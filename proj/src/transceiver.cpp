#include "fscmt/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fscmt {

namespace {

// (-1)^i: moves the time origin of an N-point DFT to the window center.
double center_sign(int bin) { return (bin & 1) ? -1.0 : 1.0; }

}  // namespace

Waveform::Waveform(int subcarriers, int overlap, WaveformOptions options)
    : subcarriers_(subcarriers),
      overlap_(overlap),
      length_(subcarriers * overlap),
      options_(options),
      spreading_(design_coeffs(overlap), subcarriers),
      phase_(subcarriers),
      prototype_(synth_time_filter(spreading_.coeffs(), subcarriers)),
      dft_(length_),
      tx_gain_(options.unit_power ? std::sqrt(subcarriers / 2.0) : 1.0) {
  if (options_.sample_rate_hz <= 0.0)
    throw std::invalid_argument("Waveform: sample rate must be positive");
}

cplx Waveform::symbol_phase(int subcarrier, long symbol_index) const {
  return j_pow(subcarrier + (options_.time_phase ? symbol_index : 0));
}

std::size_t Waveform::signal_length(std::size_t symbols) const {
  if (symbols == 0) return 0;
  return (symbols - 1) * static_cast<std::size_t>(hop()) + static_cast<std::size_t>(length_);
}

SymbolMatrix random_symbols(int subcarriers, int symbols, Alphabet alphabet, Rng& rng) {
  SymbolMatrix s(subcarriers, symbols);
  if (alphabet == Alphabet::pam2) {
    std::bernoulli_distribution bit(0.5);
    for (int n = 0; n < symbols; ++n)
      for (int m = 0; m < subcarriers; ++m) s(m, n) = bit(rng) ? 1.0 : -1.0;
  } else {
    static const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
    const double norm = 1.0 / std::sqrt(5.0);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int n = 0; n < symbols; ++n)
      for (int m = 0; m < subcarriers; ++m) s(m, n) = levels[pick(rng)] * norm;
  }
  return s;
}

Eigen::VectorXcd modulate_symbol(const Eigen::Ref<const Eigen::VectorXd>& symbol,
                                 const Waveform& waveform, long symbol_index) {
  const int L = waveform.subcarriers();
  const int K = waveform.overlap();
  const int N = waveform.length();
  if (symbol.size() != L)
    throw std::invalid_argument("modulate_symbol: expected " + std::to_string(L) +
                                " symbols, got " + std::to_string(symbol.size()));
  const auto& A = waveform.spreading();
  Eigen::VectorXcd bins = Eigen::VectorXcd::Zero(N);
  for (int m = 0; m < L; ++m) {
    if (symbol[m] == 0.0) continue;
    const cplx v = waveform.symbol_phase(m, symbol_index) * symbol[m];
    for (int k = -K + 1; k < K; ++k) bins[A.bin(m, k)] += A.coeffs()(k) * v;
  }
  for (int i = 0; i < N; ++i) bins[i] *= center_sign(i);

  Eigen::VectorXcd out(N);
  waveform.dft().inverse({bins.data(), static_cast<std::size_t>(N)},
                         {out.data(), static_cast<std::size_t>(N)});
  out *= waveform.tx_gain();
  return out;
}

TimeSignal overlap_add(std::span<const Eigen::VectorXcd> symbols, int hop, double sample_rate_hz) {
  if (symbols.empty()) throw std::invalid_argument("overlap_add: no symbols");
  if (hop <= 0) throw std::invalid_argument("overlap_add: hop must be positive");
  const Eigen::Index n = symbols.front().size();
  TimeSignal out;
  out.sample_rate_hz = sample_rate_hz;
  out.samples = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(symbols.size() - 1) * hop + n);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].size() != n)
      throw std::invalid_argument("overlap_add: symbol vectors differ in length");
    out.samples.segment(static_cast<Eigen::Index>(i) * hop, n) += symbols[i];
  }
  return out;
}

TimeSignal transmit(const SymbolMatrix& symbols, const Waveform& waveform) {
  std::vector<Eigen::VectorXcd> parts;
  parts.reserve(symbols.cols());
  for (Eigen::Index n = 0; n < symbols.cols(); ++n)
    parts.push_back(modulate_symbol(symbols.col(n), waveform, static_cast<long>(n)));
  return overlap_add(parts, waveform.hop(), waveform.sample_rate_hz());
}

BinFrame analyze_windows(const TimeSignal& signal, int symbols, long first_offset,
                         const Waveform& waveform) {
  if (first_offset < 0) throw std::invalid_argument("analyze_windows: negative first_offset");
  if (symbols < 0) throw std::invalid_argument("analyze_windows: negative symbol count");
  const int N = waveform.length();
  const long available = static_cast<long>(signal.samples.size());

  BinFrame frame;
  frame.bins.resize(N, symbols);
  frame.window_offsets.resize(symbols);
  Eigen::VectorXcd window(N), spectrum(N);
  for (int n = 0; n < symbols; ++n) {
    const long start = first_offset + static_cast<long>(n) * waveform.hop();
    frame.window_offsets[n] = start;
    const long take = std::clamp(available - start, 0L, static_cast<long>(N));
    window.setZero();
    if (take > 0) window.head(take) = signal.samples.segment(start, take);
    waveform.dft().forward({window.data(), static_cast<std::size_t>(N)},
                           {spectrum.data(), static_cast<std::size_t>(N)});
    for (int i = 0; i < N; ++i) frame.bins(i, n) = spectrum[i] * center_sign(i);
  }
  return frame;
}

Eigen::VectorXcd despread(const Eigen::Ref<const Eigen::VectorXcd>& bins,
                          const Waveform& waveform, long symbol_index) {
  const int L = waveform.subcarriers();
  const int K = waveform.overlap();
  if (bins.size() != waveform.length())
    throw std::invalid_argument("despread: expected " + std::to_string(waveform.length()) +
                                " bins, got " + std::to_string(bins.size()));
  const auto& A = waveform.spreading();
  const double inv_gain = 1.0 / waveform.round_trip_gain();
  Eigen::VectorXcd out(L);
  for (int m = 0; m < L; ++m) {
    cplx acc{0.0, 0.0};
    for (int k = -K + 1; k < K; ++k) acc += A.coeffs()(k) * bins[A.bin(m, k)];
    out[m] = std::conj(waveform.symbol_phase(m, symbol_index)) * acc * inv_gain;
  }
  return out;
}

Eigen::VectorXd demodulate_ideal(const Eigen::Ref<const Eigen::VectorXcd>& bins,
                                 const Waveform& waveform, long symbol_index) {
  return despread(bins, waveform, symbol_index).real();
}

SymbolMatrix demodulate_frame(const BinFrame& frame, const Waveform& waveform) {
  SymbolMatrix out(waveform.subcarriers(), frame.bins.cols());
  for (Eigen::Index n = 0; n < frame.bins.cols(); ++n)
    out.col(n) = demodulate_ideal(frame.bins.col(n), waveform, static_cast<long>(n));
  return out;
}

}  // namespace fscmt
