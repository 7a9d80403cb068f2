#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fscmt/dft.hpp"
#include "fscmt/metrics.hpp"
#include "fscmt/transceiver.hpp"
#include "oracles.hpp"

using namespace fscmt;

namespace {

// Dense reference transmitter: tx_gain * F^H / N * diag((-1)^i) * A * diag(j^(m+n)) * s.
Eigen::VectorXcd reference_symbol(const Waveform& wf, const Eigen::VectorXd& s, long n) {
  const int L = wf.subcarriers(), N = wf.length();
  const Eigen::MatrixXd A = oracle::spreading(design_coeffs(wf.overlap()), L);
  Eigen::VectorXcd phased(L);
  for (int m = 0; m < L; ++m)
    phased[m] = oracle::phase(L)[m] * std::polar(1.0, std::numbers::pi / 2 * double(n)) * s[m];
  const Eigen::VectorXcd bins = oracle::center_shift(N).asDiagonal() * (A.cast<cplx>() * phased);
  return wf.tx_gain() * oracle::dft_matrix(N).adjoint() * bins / double(N);
}

Eigen::VectorXd unit(int L, int m) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(L);
  e[m] = 1.0;
  return e;
}

}  // namespace

TEST_SUITE("dft") {

TEST_CASE("forward and inverse match the dense DFT matrix") {
  for (int N : {8, 24, 64, 100}) {
    CAPTURE(N);
    Rng rng(N);
    std::normal_distribution<double> g;
    Eigen::VectorXcd x(N);
    for (auto& v : x) v = cplx(g(rng), g(rng));
    const Dft dft(N);
    Eigen::VectorXcd X(N), back(N);
    dft.forward({x.data(), std::size_t(N)}, {X.data(), std::size_t(N)});
    CHECK((X - oracle::dft_matrix(N) * x).norm() < 1e-10 * x.norm() * N);
    dft.inverse({X.data(), std::size_t(N)}, {back.data(), std::size_t(N)});
    CHECK((back - x).norm() < 1e-12 * x.norm());
  }
}

TEST_CASE("in-place transforms are allowed") {
  const int N = 32;
  Eigen::VectorXcd x = Eigen::VectorXcd::LinSpaced(N, 0.0, 1.0);
  const Eigen::VectorXcd ref = oracle::dft_matrix(N) * x;
  Dft(N).forward({x.data(), std::size_t(N)}, {x.data(), std::size_t(N)});
  CHECK((x - ref).norm() < 1e-12);
}

}

TEST_SUITE("transceiver") {

TEST_CASE("waveform geometry") {
  const Waveform wf(16, 4);
  CHECK(wf.length() == 64);
  CHECK(wf.hop() == 8);
  CHECK(wf.edge_symbols() == 3);
  CHECK(wf.signal_length(1) == 64);
  CHECK(wf.signal_length(2) == 72);
  CHECK(wf.signal_length(0) == 0);
  CHECK_THROWS(Waveform(15, 4));
  CHECK_THROWS(Waveform(16, 7));
}

TEST_CASE("zero symbols give a zero signal") {
  const Waveform wf(8, 4);
  CHECK(modulate_symbol(Eigen::VectorXd::Zero(8), wf).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("unit impulse on subcarrier 0 gives the scaled prototype") {
  const Waveform wf(16, 4);
  const Eigen::VectorXcd x = modulate_symbol(unit(16, 0), wf);
  const auto& p = wf.prototype().taps;
  for (int n = 0; n < 64; ++n) {
    CHECK(x[n].real() == doctest::Approx(wf.tx_gain() * p[n] / 64.0).epsilon(1e-12));
    CHECK(std::abs(x[n].imag()) < 1e-14);
  }
}

TEST_CASE("unit impulse on subcarrier 1 is the prototype shifted by K bins and rotated by j") {
  const Waveform wf(16, 4);
  const Eigen::VectorXcd x = modulate_symbol(unit(16, 1), wf);
  const auto& p = wf.prototype().taps;
  for (int n = 0; n < 64; ++n) {
    const cplx ref = wf.tx_gain() / 64.0 * p[n] * std::polar(1.0, 2.0 * std::numbers::pi * 4 * n / 64) *
                     cplx(0, 1);
    CHECK(std::abs(x[n] - ref) < 1e-14);
  }
}

TEST_CASE("modulation matches the dense reference for random symbols and symbol times") {
  const Waveform wf(8, 4);
  Rng rng(3);
  for (long n : {0L, 1L, 2L, 7L}) {
    const SymbolMatrix s = random_symbols(8, 1, Alphabet::pam4, rng);
    const Eigen::VectorXcd ref = reference_symbol(wf, s.col(0), n);
    CHECK((modulate_symbol(s.col(0), wf, n) - ref).norm() < 1e-13);
  }
}

TEST_CASE("modulation is linear") {
  const Waveform wf(8, 3);
  Rng rng(5);
  const SymbolMatrix a = random_symbols(8, 1, Alphabet::pam2, rng);
  const SymbolMatrix b = random_symbols(8, 1, Alphabet::pam4, rng);
  const Eigen::VectorXd sum = 2.0 * a.col(0) - 0.5 * b.col(0);
  const Eigen::VectorXcd lhs = modulate_symbol(sum, wf);
  const Eigen::VectorXcd rhs = 2.0 * modulate_symbol(a.col(0), wf) - 0.5 * modulate_symbol(b.col(0), wf);
  CHECK((lhs - rhs).norm() < 1e-13);
}

TEST_CASE("wrong symbol length is rejected") {
  const Waveform wf(8, 4);
  CHECK_THROWS_AS(modulate_symbol(Eigen::VectorXd::Zero(7), wf), std::invalid_argument);
}

TEST_CASE("unit-power scaling gives unit average sample power") {
  const Waveform wf(16, 4);
  Rng rng(9);
  const SymbolMatrix s = random_symbols(16, 400, Alphabet::pam2, rng);
  const TimeSignal x = transmit(s, wf);
  // Steady-state region, away from the ramp-up and ramp-down.
  const Eigen::Index start = 64, len = x.samples.size() - 128;
  const double power = x.samples.segment(start, len).squaredNorm() / double(len);
  CHECK(power == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("overlap-add") {
  SUBCASE("lengths") {
    const std::vector<Eigen::VectorXcd> one{Eigen::VectorXcd::Ones(64)};
    CHECK(overlap_add(one, 8, 1.0).samples.size() == 64);
    const std::vector<Eigen::VectorXcd> two(2, Eigen::VectorXcd::Ones(64));
    CHECK(overlap_add(two, 8, 1.0).samples.size() == 72);
  }
  SUBCASE("superposition of two identical symbols") {
    Eigen::VectorXcd v(64);
    for (int t = 0; t < 64; ++t) v[t] = cplx(t, -t);
    const std::vector<Eigen::VectorXcd> two(2, v);
    const TimeSignal x = overlap_add(two, 8, 1.0);
    for (int t = 8; t < 64; ++t) CHECK(x.samples[t] == v[t] + v[t - 8]);
    for (int t = 0; t < 8; ++t) CHECK(x.samples[t] == v[t]);
    for (int t = 64; t < 72; ++t) CHECK(x.samples[t] == v[t - 8]);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(overlap_add({}, 8, 1.0), std::invalid_argument);
    const std::vector<Eigen::VectorXcd> mixed{Eigen::VectorXcd::Ones(64), Eigen::VectorXcd::Ones(63)};
    CHECK_THROWS_AS(overlap_add(mixed, 8, 1.0), std::invalid_argument);
  }
}

TEST_CASE("analysis of a single symbol returns the spread, phased symbols") {
  const Waveform wf(16, 4);
  Rng rng(11);
  const SymbolMatrix s = random_symbols(16, 1, Alphabet::pam2, rng);
  const TimeSignal x = transmit(s, wf);
  const BinFrame Y = analyze_windows(x, 1, 0, wf);
  const Eigen::MatrixXd A = oracle::spreading(wf.coeffs(), 16);
  const Eigen::VectorXcd ref =
      wf.tx_gain() * A.cast<cplx>() * (oracle::phase(16).array() * s.col(0).cast<cplx>().array()).matrix();
  CHECK((Y.bins.col(0) - ref).norm() < 1e-12);
}

TEST_CASE("analysis of silence is silence, including windows past the end") {
  const Waveform wf(8, 4);
  TimeSignal x{Eigen::VectorXcd::Zero(40), 1.0};
  const BinFrame Y = analyze_windows(x, 10, 0, wf);
  CHECK(Y.bins.cols() == 10);
  CHECK(Y.bins.cwiseAbs().maxCoeff() == 0.0);
  CHECK(Y.window_offsets[3] == 12);
  CHECK_THROWS_AS(analyze_windows(x, 1, -1, wf), std::invalid_argument);
}

TEST_CASE("a delay of d samples multiplies bin i by exp(-j 2 pi i d / N)") {
  const Waveform wf(8, 4);
  const int N = 32, d = 5;
  Rng rng(2);
  std::normal_distribution<double> g;
  Eigen::VectorXcd burst(N - d);
  for (auto& v : burst) v = cplx(g(rng), g(rng));
  TimeSignal a{Eigen::VectorXcd::Zero(N), 1.0}, b{Eigen::VectorXcd::Zero(N), 1.0};
  a.samples.head(N - d) = burst;
  b.samples.segment(d, N - d) = burst;
  const BinFrame Ya = analyze_windows(a, 1, 0, wf), Yb = analyze_windows(b, 1, 0, wf);
  for (int i = 0; i < N; ++i)
    CHECK(std::abs(Yb.bins(i, 0) - Ya.bins(i, 0) * std::polar(1.0, -2.0 * std::numbers::pi * i * d / N)) <
          1e-12);
}

TEST_CASE("demodulation picks off one subcarrier and keeps the real part") {
  const Waveform wf(16, 4);
  const Eigen::MatrixXd A = oracle::spreading(wf.coeffs(), 16);
  const Eigen::VectorXcd y = wf.round_trip_gain() / wf.coeffs().energy() * A.cast<cplx>().col(0);
  const Eigen::VectorXd s = demodulate_ideal(y, wf);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.tail(15).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::VectorXd q = demodulate_ideal(cplx(0, 1) * y, wf);
  CHECK(std::abs(q[0]) < 1e-12);
  CHECK_THROWS_AS(demodulate_ideal(Eigen::VectorXcd::Zero(63), wf), std::invalid_argument);
}

TEST_CASE("back-to-back reconstruction exceeds 55 dB on every subcarrier") {
  for (int L : {8, 16, 32}) {
    CAPTURE(L);
    const Waveform wf(L, 4);
    Rng rng(L);
    const SymbolMatrix s = random_symbols(L, 64, Alphabet::pam2, rng);
    const SymbolMatrix est = demodulate_frame(analyze_windows(transmit(s, wf), 64, 0, wf), wf);
    const SirReport r = measure_sir(s, est, wf.edge_symbols());
    for (int m = 0; m < L; ++m) CHECK(r.value_db(m) >= 55.0);
  }
}

TEST_CASE("a single isolated symbol round-trips") {
  const Waveform wf(16, 4);
  Rng rng(4);
  const SymbolMatrix s = random_symbols(16, 1, Alphabet::pam4, rng);
  const SymbolMatrix est = demodulate_frame(analyze_windows(transmit(s, wf), 1, 0, wf), wf);
  CHECK((est - s).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("PAM alphabets have unit power") {
  Rng rng(1);
  for (auto a : {Alphabet::pam2, Alphabet::pam4}) {
    const SymbolMatrix s = random_symbols(64, 2000, a, rng);
    CHECK(s.squaredNorm() / double(s.size()) == doctest::Approx(1.0).epsilon(0.02));
  }
}

}
