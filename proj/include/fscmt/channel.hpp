#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fscmt/random.hpp"
#include "fscmt/transceiver.hpp"

namespace fscmt {

/// Tapped-delay-line power delay profile.
struct ChannelProfile {
  std::string name;
  std::vector<double> delays_s;
  std::vector<double> powers_db;

  /// Linear tap powers scaled to sum to 1.
  std::vector<double> normalized_powers() const;
  /// Tap delays rounded to the nearest sample at the given rate.
  std::vector<int> sample_delays(double sample_rate_hz) const;
};

/// Validates and builds a profile. The first delay must be 0 and delays ascending.
ChannelProfile make_profile(std::string name, std::vector<double> delays_us,
                            std::vector<double> powers_db);

/// SUI-4: delays {0, 1.5, 4.0} us, powers {0, -4, -8} dB, Rayleigh taps.
ChannelProfile sui4_profile();
/// Single tap at delay 0 (frequency-flat).
ChannelProfile flat_profile();

/// One block-static multi-user, multi-antenna channel draw.
struct ChannelRealization {
  int users = 0;
  int antennas = 0;
  /// impulse[u](a, d) = gain from user u to antenna a at delay d samples.
  std::vector<Eigen::MatrixXcd> impulse;
  /// freq[i](a, u) = N-point DFT of impulse[u](a, :) at bin i.
  std::vector<Eigen::MatrixXcd> freq;

  int bins() const { return static_cast<int>(freq.size()); }
  int max_delay() const;
  /// Channel seen by the first `count` antennas.
  ChannelRealization first_antennas(int count) const;
};

/// Builds a realization from impulse responses, computing the per-bin responses
/// exactly with an N-point DFT.
ChannelRealization from_impulse(std::vector<Eigen::MatrixXcd> impulse, int bins);

/// Independent zero-mean circular Gaussian taps with variance equal to the
/// normalized tap power, placed at the quantized delays.
ChannelRealization draw_channels(const ChannelProfile& profile, int users, int antennas,
                                 double sample_rate_hz, int bins, Rng& rng);

/// rx[a] = sum_u x_u * h_{u,a} + AWGN of variance noise_variance per complex sample.
/// Output length is input length + max delay.
std::vector<TimeSignal> apply_channel(std::span<const TimeSignal> user_signals,
                                      const ChannelRealization& channel, double noise_variance,
                                      Rng& rng);

/// Per-antenna noise variance giving the requested SNR_in for unit received
/// signal power per user and antenna.
double noise_variance_for_snr_db(double snr_in_db);

/// Zero-mean circular complex Gaussian with E|z|^2 = variance.
cplx complex_gaussian(Rng& rng, double variance);

}  // namespace fscmt
