#include "fscmt/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fscmt {

namespace {

constexpr double kPairingTolerance = 1e-6;

// Frequency-sampling designs for the overlapping factors in use (positive half,
// c_0 first).
std::vector<double> tabulated_half(int overlap) {
  switch (overlap) {
    case 2:
      return {1.0, std::numbers::sqrt2 / 2.0};
    case 3:
      return {1.0, 0.911438, 0.411438};
    case 4:
      return {1.0, 0.97195983, std::numbers::sqrt2 / 2.0, 0.23514695};
    default:
      throw std::invalid_argument("design_coeffs: unsupported overlapping factor K=" +
                                  std::to_string(overlap) + " (supported: 2, 3, 4)");
  }
}

}  // namespace

FreqCoeffs::FreqCoeffs(int overlap, std::vector<double> half)
    : overlap_(overlap), half_(std::move(half)) {
  if (overlap_ < 1)
    throw std::invalid_argument("FreqCoeffs: overlapping factor must be positive");
  if (static_cast<int>(half_.size()) != overlap_)
    throw std::invalid_argument("FreqCoeffs: expected K coefficients c_0..c_{K-1}");
}

double FreqCoeffs::operator()(int k) const {
  const int a = std::abs(k);
  if (a >= overlap_) return 0.0;
  return half_[a];
}

double FreqCoeffs::energy() const {
  double e = half_[0] * half_[0];
  for (int k = 1; k < overlap_; ++k) e += 2.0 * half_[k] * half_[k];
  return e;
}

double FreqCoeffs::pairing_error() const {
  double worst = 0.0;
  for (int k = 1; k < overlap_; ++k) {
    const double a = half_[k];
    const double b = half_[overlap_ - k];
    worst = std::max(worst, std::abs(a * a + b * b - 1.0));
  }
  return worst;
}

FreqCoeffs design_coeffs(int overlap) {
  FreqCoeffs coeffs(overlap, tabulated_half(overlap));
  if (coeffs.pairing_error() > kPairingTolerance)
    throw std::logic_error("design_coeffs: tabulated coefficients violate root-Nyquist pairing");
  return coeffs;
}

PrototypeFilter synth_time_filter(const FreqCoeffs& coeffs, int subcarriers) {
  if (subcarriers <= 0)
    throw std::invalid_argument("synth_time_filter: L must be positive");
  if (subcarriers % 2 != 0)
    throw std::invalid_argument("synth_time_filter: L must be even (got " +
                                std::to_string(subcarriers) + ")");
  const int K = coeffs.overlap();
  const int N = K * subcarriers;
  const double half_n = N / 2.0;

  std::vector<double> taps(N);
  double max_re = 0.0;
  double max_im = 0.0;
  for (int n = 0; n < N; ++n) {
    cplx acc{0.0, 0.0};
    for (int k = -K + 1; k < K; ++k) {
      const double arg = 2.0 * std::numbers::pi * k * (n - half_n) / N;
      acc += coeffs(k) * cplx(std::cos(arg), std::sin(arg));
    }
    taps[n] = acc.real();
    max_re = std::max(max_re, std::abs(acc.real()));
    max_im = std::max(max_im, std::abs(acc.imag()));
  }
  return PrototypeFilter{coeffs, subcarriers, N, std::move(taps),
                         max_re > 0.0 ? max_im / max_re : 0.0};
}

double autocorrelation(const PrototypeFilter& filter, int lag) {
  const int N = filter.length;
  const int d = std::abs(lag);
  double acc = 0.0;
  for (int n = d; n < N; ++n) acc += filter.taps[n] * filter.taps[n - d];
  return acc;
}

double nyquist_residual(const PrototypeFilter& filter) {
  const double q0 = autocorrelation(filter, 0);
  double worst = 0.0;
  for (int m = 1; m * filter.subcarriers < filter.length; ++m)
    worst = std::max(worst, std::abs(autocorrelation(filter, m * filter.subcarriers)) / q0);
  return worst;
}

SpreadingMatrix::SpreadingMatrix(const FreqCoeffs& coeffs, int subcarriers)
    : coeffs_(coeffs) {
  if (subcarriers <= 0)
    throw std::invalid_argument("build_spreading: L must be positive");
  const int K = coeffs_.overlap();
  const int N = K * subcarriers;
  dense_ = Eigen::MatrixXd::Zero(N, subcarriers);
  for (int m = 0; m < subcarriers; ++m)
    for (int k = -K + 1; k < K; ++k) dense_(bin(m, k), m) = coeffs_(k);
}

int SpreadingMatrix::bin(int subcarrier, int k) const {
  const int N = rows();
  return ((subcarrier * coeffs_.overlap() + k) % N + N) % N;
}

SpreadingMatrix build_spreading(const FreqCoeffs& coeffs, int subcarriers) {
  return SpreadingMatrix(coeffs, subcarriers);
}

PhaseMatrix::PhaseMatrix(int subcarriers) {
  if (subcarriers < 1) throw std::invalid_argument("build_phase: L must be >= 1");
  diag_.resize(subcarriers);
  for (int l = 0; l < subcarriers; ++l) diag_[l] = j_pow(l);
}

PhaseMatrix build_phase(int subcarriers) { return PhaseMatrix(subcarriers); }

cplx j_pow(long e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace fscmt
