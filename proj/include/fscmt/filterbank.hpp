#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace fscmt {

using cplx = std::complex<double>;

/// Frequency-domain prototype coefficients c_k, k = -K+1 .. K-1.
///
/// Only the non-negative half is stored; c_{-k} = c_k holds by construction.
/// c_0 is kept at 1 and the square-root Nyquist pairing
/// c_k^2 + c_{K-k}^2 = 1 holds for k = 1 .. K-1.
class FreqCoeffs {
 public:
  FreqCoeffs(int overlap, std::vector<double> half);

  int overlap() const { return overlap_; }
  /// Number of distinct tones, 2K-1.
  int num_taps() const { return 2 * overlap_ - 1; }
  /// c_k for k in [-K+1, K-1].
  double operator()(int k) const;
  const std::vector<double>& half() const { return half_; }
  /// sum_k c_k^2 over all 2K-1 tones.
  double energy() const;
  /// max_k |c_k^2 + c_{K-k}^2 - 1|.
  double pairing_error() const;

 private:
  int overlap_;
  std::vector<double> half_;
};

/// Returns the tabulated frequency-sampling design for K in {2, 3, 4}.
/// Throws std::invalid_argument for any other K.
FreqCoeffs design_coeffs(int overlap);

/// Real time-domain prototype of length N = K*L.
///
/// taps(n) = sum_k c_k cos(2 pi k (n - N/2) / N): the pulse is centered in the
/// N-sample symbol window, so taps(N/2) is the peak and taps(n) = taps(N-n).
struct PrototypeFilter {
  FreqCoeffs coeffs;
  int subcarriers;
  int length;
  std::vector<double> taps;
  /// max |Im| / max |Re| of the complex synthesis before the real part is kept.
  double imag_residual;
};

PrototypeFilter synth_time_filter(const FreqCoeffs& coeffs, int subcarriers);

/// Linear autocorrelation q(d) = sum_n p(n) p(n-d) at lag d (real taps).
double autocorrelation(const PrototypeFilter& filter, int lag);

/// max_{m != 0} |q(mL)| / q(0).
double nyquist_residual(const PrototypeFilter& filter);

/// N x L spreading matrix. Column m holds c_k at row (mK + k) mod N.
///
/// Stored densely; callers that need speed use center_bin()/bin() and iterate
/// the 2K-1 taps directly.
class SpreadingMatrix {
 public:
  SpreadingMatrix(const FreqCoeffs& coeffs, int subcarriers);

  int rows() const { return static_cast<int>(dense_.rows()); }
  int cols() const { return static_cast<int>(dense_.cols()); }
  const Eigen::MatrixXd& dense() const { return dense_; }
  const FreqCoeffs& coeffs() const { return coeffs_; }

  int center_bin(int subcarrier) const { return subcarrier * coeffs_.overlap(); }
  /// Row index of tap k of the given column, wrapped modulo N.
  int bin(int subcarrier, int k) const;

 private:
  FreqCoeffs coeffs_;
  Eigen::MatrixXd dense_;
};

SpreadingMatrix build_spreading(const FreqCoeffs& coeffs, int subcarriers);

/// Diagonal phase adjustment e^{j pi l / 2}, l = 0 .. L-1.
class PhaseMatrix {
 public:
  explicit PhaseMatrix(int subcarriers);

  int size() const { return static_cast<int>(diag_.size()); }
  const Eigen::VectorXcd& diagonal() const { return diag_; }
  cplx operator[](int l) const { return diag_[l]; }
  Eigen::MatrixXcd dense() const { return diag_.asDiagonal(); }

 private:
  Eigen::VectorXcd diag_;
};

PhaseMatrix build_phase(int subcarriers);

/// j^e for integer e, exact.
cplx j_pow(long e);

}  // namespace fscmt
