#include "fscmt/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

#include <Eigen/QR>

#include "fscmt/channel.hpp"
#include "fscmt/equalizer.hpp"
#include "fscmt/filterbank.hpp"
#include "fscmt/metrics.hpp"
#include "fscmt/transceiver.hpp"

namespace fscmt {

namespace {

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SelfCheck check(const std::string& name, const std::function<SelfCheck()>& body) {
  try {
    SelfCheck r = body();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

SelfCheck pairing() {
  double worst = 0.0;
  for (int K : {2, 3, 4}) worst = std::max(worst, design_coeffs(K).pairing_error());
  return {"", worst < 1e-6, fmt("max |c_k^2 + c_{K-k}^2 - 1| = %.2e", worst)};
}

SelfCheck nyquist() {
  double worst = 0.0;
  for (int L : {8, 16, 32, 64})
    worst = std::max(worst, nyquist_residual(synth_time_filter(design_coeffs(4), L)));
  return {"", worst < 1e-3, fmt("max |q(mL)|/q(0) = %.2e", worst)};
}

SelfCheck round_trip() {
  const Waveform wf(16, 4);
  Rng rng = trial_rng(7, 0);
  const SymbolMatrix s = random_symbols(16, 64, Alphabet::pam2, rng);
  const TimeSignal x = transmit(s, wf);
  const SymbolMatrix est = demodulate_frame(analyze_windows(x, 64, 0, wf), wf);
  const SirReport r = measure_sir(s, est, wf.edge_symbols());
  double worst = 1e9;
  for (int m = 0; m < r.subcarriers(); ++m) worst = std::min(worst, r.value_db(m));
  return {"", worst >= 55.0, fmt("min per-subcarrier SIR = %.2f dB (L=16, K=4)", worst)};
}

SelfCheck mmse_oracle() {
  Rng rng = trial_rng(11, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nr = 8 + trial % 9 * 15;
    const int m = 1 + trial % 6;
    const double s2 = 0.1 + 0.05 * (trial % 10);
    Eigen::MatrixXcd H(nr, m);
    for (auto& v : H.reshaped()) v = complex_gaussian(rng, 1.0);
    const Eigen::MatrixXcd W = mmse_combiner(H, s2);
    Eigen::MatrixXcd G = H.adjoint() * H;
    G.diagonal().array() += s2;
    const Eigen::MatrixXcd X = G.colPivHouseholderQr().solve(H.adjoint());
    worst = std::max(worst, (W - X.adjoint()).norm() / X.norm());
  }
  return {"", worst < 1e-9, fmt("max relative residual = %.2e over 100 bins", worst)};
}

SelfCheck flat_equivalence() {
  const Waveform wf(16, 4);
  Rng rng = trial_rng(13, 0);
  std::vector<Eigen::MatrixXcd> h(1, Eigen::MatrixXcd(8, 1));
  for (auto& v : h[0].reshaped()) v = complex_gaussian(rng, 1.0);
  const auto ch = from_impulse(h, wf.length());
  const SymbolMatrix s = random_symbols(16, 32, Alphabet::pam2, rng);
  const std::vector<TimeSignal> tx{transmit(s, wf)};
  const auto rx = apply_channel(tx, ch, 0.0, rng);
  std::vector<BinFrame> frames;
  for (const auto& r : rx) frames.push_back(analyze_windows(r, 32, 0, wf));
  const PerBinReceived rcv = stack_antennas(frames);
  const auto fse = despread_all(equalize_bins(rcv, mmse_weights(ch.freq, 0.01)), wf);
  const auto ppn = ppn_single_tap_receive(rcv, ch.freq, 0.01, wf);
  const double diff = (fse[0] - ppn[0]).cwiseAbs().maxCoeff();
  return {"", diff < 1e-9, fmt("max |FSE - PPN| = %.2e on a flat channel", diff)};
}

SelfCheck synthetic_recovery() {
  const Waveform wf(16, 4, {.time_phase = true, .unit_power = true});
  Rng rng = trial_rng(17, 0);
  const int M = 3, nr = 4, N = wf.length();
  std::vector<Eigen::MatrixXcd> H(N, Eigen::MatrixXcd(nr, M));
  for (auto& Hi : H)
    for (auto& v : Hi.reshaped()) v = complex_gaussian(rng, 1.0);
  const SymbolMatrix s = random_symbols(16, M, Alphabet::pam2, rng);
  // Per-bin model r_tilde_i = H_i r_i, one isolated symbol per user.
  Eigen::MatrixXcd r(N, M);
  for (int u = 0; u < M; ++u) {
    Eigen::VectorXcd bins = Eigen::VectorXcd::Zero(N);
    for (int m = 0; m < 16; ++m)
      for (int k = -3; k <= 3; ++k)
        bins[wf.spreading().bin(m, k)] += wf.coeffs()(k) * wf.phase()[m] * s(m, u) * wf.tx_gain();
    r.col(u) = bins;
  }
  PerBinReceived rcv;
  for (int i = 0; i < N; ++i) rcv.bins.push_back(H[i] * r.row(i).transpose());
  const auto eq = equalize_bins(rcv, mmse_weights(H, 0.0));
  Eigen::MatrixXcd stacked(N, M);
  for (int i = 0; i < N; ++i) stacked.row(i) = eq.bins[i].col(0).transpose();
  const Eigen::MatrixXd est = despread_users(stacked, wf, 0);
  const double diff = (est - s).cwiseAbs().maxCoeff();
  return {"", diff < 1e-9, fmt("max |s_hat - s| = %.2e (Nr=4, M=3, zero noise)", diff)};
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  return {
      check("coefficient pairing", pairing),
      check("prototype Nyquist residual", nyquist),
      check("ideal-channel reconstruction", round_trip),
      check("MMSE weights vs independent solve", mmse_oracle),
      check("flat-channel FSE/PPN equivalence", flat_equivalence),
      check("synthetic per-bin zero-forcing recovery", synthetic_recovery),
  };
}

}  // namespace fscmt
