#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fscmt/channel.hpp"
#include "oracles.hpp"

using namespace fscmt;

TEST_SUITE("channel") {

TEST_CASE("SUI-4 profile") {
  const ChannelProfile p = sui4_profile();
  REQUIRE(p.delays_s.size() == 3);
  CHECK(p.sample_delays(2.8e6) == std::vector<int>{0, 4, 11});
  const auto w = p.normalized_powers();
  CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w[1] / w[0] == doctest::Approx(std::pow(10.0, -0.4)));
  CHECK(w[2] / w[0] == doctest::Approx(std::pow(10.0, -0.8)));
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(make_profile("x", {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_profile("x", {0.0, 1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_profile("x", {0.5}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_profile("x", {0.0, 2.0, 1.0}, {0, 0, 0}), std::invalid_argument);
  CHECK_NOTHROW(make_profile("x", {0.0, 1.0}, {0.0, -3.0}));
}

TEST_CASE("a single-tap channel is flat across bins") {
  Rng rng(1);
  const auto ch = draw_channels(flat_profile(), 2, 3, 2.8e6, 64, rng);
  for (int u = 0; u < 2; ++u)
    for (int a = 0; a < 3; ++a)
      for (int i = 1; i < 64; ++i) CHECK(std::abs(ch.freq[i](a, u) - ch.freq[0](a, u)) < 1e-15);
}

TEST_CASE("realization shapes") {
  Rng rng(2);
  const auto ch = draw_channels(sui4_profile(), 2, 4, 2.8e6, 64, rng);
  CHECK(ch.users == 2);
  CHECK(ch.antennas == 4);
  CHECK(ch.bins() == 64);
  CHECK(ch.freq[0].rows() == 4);
  CHECK(ch.freq[0].cols() == 2);
  CHECK(ch.max_delay() == 11);
  CHECK_THROWS_AS(draw_channels(sui4_profile(), 0, 4, 2.8e6, 64, rng), std::invalid_argument);
}

TEST_CASE("frequency response is the DFT of the impulse response") {
  Rng rng(3);
  const auto ch = draw_channels(sui4_profile(), 2, 3, 2.8e6, 32, rng);
  const Eigen::MatrixXcd F = oracle::dft_matrix(32);
  for (int u = 0; u < 2; ++u)
    for (int a = 0; a < 3; ++a) {
      Eigen::VectorXcd h = Eigen::VectorXcd::Zero(32);
      h.head(ch.impulse[u].cols()) = ch.impulse[u].row(a).transpose();
      const Eigen::VectorXcd H = F * h;
      for (int i = 0; i < 32; ++i) CHECK(std::abs(ch.freq[i](a, u) - H[i]) < 1e-12);
    }
}

TEST_CASE("first_antennas keeps a prefix") {
  Rng rng(4);
  const auto ch = draw_channels(sui4_profile(), 2, 8, 2.8e6, 32, rng);
  const auto sub = ch.first_antennas(3);
  CHECK(sub.antennas == 3);
  CHECK(sub.freq[5] == ch.freq[5].topRows(3));
  CHECK(sub.impulse[1] == ch.impulse[1].topRows(3));
  CHECK_THROWS_AS(ch.first_antennas(9), std::invalid_argument);
  CHECK_THROWS_AS(ch.first_antennas(0), std::invalid_argument);
}

TEST_CASE("tap powers match the profile over 1e5 draws") {
  Rng rng(5);
  const auto p = sui4_profile();
  const auto w = p.normalized_powers();
  const auto delays = p.sample_delays(2.8e6);
  const auto ch = draw_channels(p, 1, 100000, 2.8e6, 16, rng);
  for (std::size_t t = 0; t < 3; ++t) {
    CAPTURE(t);
    const double mean = ch.impulse[0].col(delays[t]).squaredNorm() / 1e5;
    CHECK(mean == doctest::Approx(w[t]).epsilon(0.02));
  }
}

TEST_CASE("identity channel without noise sums the users") {
  std::vector<Eigen::MatrixXcd> h(2, Eigen::MatrixXcd::Ones(1, 1));
  const auto ch = from_impulse(h, 8);
  const std::vector<TimeSignal> x{{Eigen::VectorXcd::LinSpaced(10, 0, 9), 1.0},
                                  {Eigen::VectorXcd::Constant(10, cplx(0, 1)), 1.0}};
  Rng rng(6);
  const auto rx = apply_channel(x, ch, 0.0, rng);
  REQUIRE(rx.size() == 1);
  CHECK(rx[0].samples == x[0].samples + x[1].samples);
}

TEST_CASE("a delayed impulse channel delays the signal") {
  const int d = 4;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(1, d + 1);
  h(0, d) = 1.0;
  const auto ch = from_impulse({h}, 16);
  const std::vector<TimeSignal> x{{Eigen::VectorXcd::LinSpaced(10, 1, 10), 1.0}};
  Rng rng(7);
  const auto rx = apply_channel(x, ch, 0.0, rng);
  REQUIRE(rx[0].samples.size() == 14);
  CHECK(rx[0].samples.head(d).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rx[0].samples.tail(10) == x[0].samples);
}

TEST_CASE("noise variance on silence") {
  const auto ch = from_impulse({Eigen::MatrixXcd::Ones(2, 1)}, 8);
  const std::vector<TimeSignal> x{{Eigen::VectorXcd::Zero(100000), 1.0}};
  Rng rng(8);
  const auto rx = apply_channel(x, ch, 1.0, rng);
  for (const auto& r : rx) CHECK(r.samples.squaredNorm() / 1e5 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("SNR conversion is recovered from measured powers") {
  for (double snr : {-1.0, 0.0, 10.0}) {
    const double var = noise_variance_for_snr_db(snr);
    Rng rng(9);
    double acc = 0.0;
    for (int i = 0; i < 200000; ++i) acc += std::norm(complex_gaussian(rng, var));
    const double measured = 10.0 * std::log10(1.0 / (acc / 200000));
    CHECK(std::abs(measured - snr) < 0.1);
  }
}

TEST_CASE("received power per user and antenna averages the transmit power over 1e5 draws") {
  Rng rng(10);
  const auto p = sui4_profile();
  const std::vector<TimeSignal> x{{Eigen::VectorXcd::Ones(100), 1.0}};
  double acc = 0.0;
  int count = 0;
  for (int trial = 0; trial < 25000; ++trial) {
    const auto ch = draw_channels(p, 1, 4, 2.8e6, 16, rng);
    const auto rx = apply_channel(x, ch, 0.0, rng);
    for (const auto& r : rx) {
      acc += r.samples.segment(20, 80).squaredNorm() / 80.0;
      ++count;
    }
  }
  CHECK(acc / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("apply_channel argument checks") {
  const auto ch = from_impulse({Eigen::MatrixXcd::Ones(1, 1)}, 8);
  Rng rng(11);
  const std::vector<TimeSignal> two{{Eigen::VectorXcd::Ones(4), 1.0}, {Eigen::VectorXcd::Ones(4), 1.0}};
  CHECK_THROWS_AS(apply_channel(two, ch, 0.0, rng), std::invalid_argument);
  const std::vector<TimeSignal> one{{Eigen::VectorXcd::Ones(4), 1.0}};
  CHECK_THROWS_AS(apply_channel(one, ch, -1.0, rng), std::invalid_argument);
}

}
