#include "fscmt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace fscmt {

std::vector<double> ChannelProfile::normalized_powers() const {
  std::vector<double> lin(powers_db.size());
  std::transform(powers_db.begin(), powers_db.end(), lin.begin(),
                 [](double db) { return std::pow(10.0, db / 10.0); });
  const double total = std::accumulate(lin.begin(), lin.end(), 0.0);
  for (auto& p : lin) p /= total;
  return lin;
}

std::vector<int> ChannelProfile::sample_delays(double sample_rate_hz) const {
  std::vector<int> out(delays_s.size());
  std::transform(delays_s.begin(), delays_s.end(), out.begin(),
                 [&](double d) { return static_cast<int>(std::lround(d * sample_rate_hz)); });
  return out;
}

ChannelProfile make_profile(std::string name, std::vector<double> delays_us,
                            std::vector<double> powers_db) {
  if (delays_us.empty()) throw std::invalid_argument("channel profile: no taps");
  if (delays_us.size() != powers_db.size())
    throw std::invalid_argument("channel profile: delays_us and powers_db differ in length");
  if (delays_us.front() != 0.0)
    throw std::invalid_argument("channel profile: first delay must be 0");
  for (std::size_t i = 1; i < delays_us.size(); ++i)
    if (delays_us[i] < delays_us[i - 1])
      throw std::invalid_argument("channel profile: delays must be ascending");
  for (double p : powers_db)
    if (!std::isfinite(p)) throw std::invalid_argument("channel profile: non-finite tap power");

  ChannelProfile profile{std::move(name), {}, std::move(powers_db)};
  profile.delays_s.reserve(delays_us.size());
  for (double d : delays_us) profile.delays_s.push_back(d * 1e-6);
  return profile;
}

ChannelProfile sui4_profile() { return make_profile("sui4", {0.0, 1.5, 4.0}, {0.0, -4.0, -8.0}); }

ChannelProfile flat_profile() { return make_profile("flat", {0.0}, {0.0}); }

int ChannelRealization::max_delay() const {
  return impulse.empty() ? 0 : static_cast<int>(impulse.front().cols()) - 1;
}

ChannelRealization ChannelRealization::first_antennas(int count) const {
  if (count < 1 || count > antennas)
    throw std::invalid_argument("first_antennas: count out of range");
  ChannelRealization out;
  out.users = users;
  out.antennas = count;
  out.impulse.reserve(impulse.size());
  for (const auto& h : impulse) out.impulse.push_back(h.topRows(count));
  out.freq.reserve(freq.size());
  for (const auto& H : freq) out.freq.push_back(H.topRows(count));
  return out;
}

ChannelRealization from_impulse(std::vector<Eigen::MatrixXcd> impulse, int bins) {
  if (impulse.empty()) throw std::invalid_argument("from_impulse: no users");
  const Eigen::Index antennas = impulse.front().rows();
  const Eigen::Index taps = impulse.front().cols();
  if (taps > bins) throw std::invalid_argument("from_impulse: impulse longer than the DFT");
  for (const auto& h : impulse)
    if (h.rows() != antennas || h.cols() != taps)
      throw std::invalid_argument("from_impulse: users have inconsistent shapes");

  ChannelRealization ch;
  ch.users = static_cast<int>(impulse.size());
  ch.antennas = static_cast<int>(antennas);
  ch.freq.assign(bins, Eigen::MatrixXcd::Zero(antennas, ch.users));
  for (int d = 0; d < taps; ++d) {
    bool any = false;
    for (const auto& h : impulse) any = any || !h.col(d).isZero(0.0);
    if (!any) continue;
    for (int i = 0; i < bins; ++i) {
      const double arg = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(i) * d) % bins) / bins;
      const cplx rot(std::cos(arg), std::sin(arg));
      for (int u = 0; u < ch.users; ++u) ch.freq[i].col(u) += impulse[u].col(d) * rot;
    }
  }
  ch.impulse = std::move(impulse);
  return ch;
}

cplx complex_gaussian(Rng& rng, double variance) {
  std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

ChannelRealization draw_channels(const ChannelProfile& profile, int users, int antennas,
                                 double sample_rate_hz, int bins, Rng& rng) {
  if (users < 1 || antennas < 1)
    throw std::invalid_argument("draw_channels: users and antennas must be >= 1");
  const auto delays = profile.sample_delays(sample_rate_hz);
  const auto powers = profile.normalized_powers();
  const int taps = *std::max_element(delays.begin(), delays.end()) + 1;

  std::vector<Eigen::MatrixXcd> impulse(users, Eigen::MatrixXcd::Zero(antennas, taps));
  for (int u = 0; u < users; ++u)
    for (int a = 0; a < antennas; ++a)
      for (std::size_t t = 0; t < delays.size(); ++t)
        impulse[u](a, delays[t]) += complex_gaussian(rng, powers[t]);
  return from_impulse(std::move(impulse), bins);
}

std::vector<TimeSignal> apply_channel(std::span<const TimeSignal> user_signals,
                                      const ChannelRealization& channel, double noise_variance,
                                      Rng& rng) {
  if (static_cast<int>(user_signals.size()) != channel.users)
    throw std::invalid_argument("apply_channel: user count does not match the channel");
  if (noise_variance < 0.0) throw std::invalid_argument("apply_channel: negative noise variance");
  const Eigen::Index len = user_signals.front().samples.size();
  const double fs = user_signals.front().sample_rate_hz;
  for (const auto& s : user_signals)
    if (s.samples.size() != len || s.sample_rate_hz != fs)
      throw std::invalid_argument("apply_channel: user signals differ in length or sample rate");

  const int taps = channel.max_delay() + 1;
  std::vector<TimeSignal> rx(channel.antennas);
  for (int a = 0; a < channel.antennas; ++a) {
    TimeSignal& out = rx[a];
    out.sample_rate_hz = fs;
    out.samples = Eigen::VectorXcd::Zero(len + taps - 1);
    for (int u = 0; u < channel.users; ++u) {
      for (int d = 0; d < taps; ++d) {
        const cplx g = channel.impulse[u](a, d);
        if (g == cplx{}) continue;
        out.samples.segment(d, len) += g * user_signals[u].samples;
      }
    }
    if (noise_variance > 0.0)
      for (auto& v : out.samples) v += complex_gaussian(rng, noise_variance);
  }
  return rx;
}

double noise_variance_for_snr_db(double snr_in_db) { return std::pow(10.0, -snr_in_db / 10.0); }

}  // namespace fscmt
