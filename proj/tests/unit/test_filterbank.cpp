#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fscmt/filterbank.hpp"
#include "oracles.hpp"

using namespace fscmt;

TEST_SUITE("filterbank") {

TEST_CASE("K=4 coefficients match the tabulated design") {
  const FreqCoeffs c = design_coeffs(4);
  CHECK(c(0) == doctest::Approx(1.0));
  CHECK(c(1) == doctest::Approx(0.971960).epsilon(1e-6));
  CHECK(c(2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(c(3) == doctest::Approx(0.235147).epsilon(1e-5));
  CHECK(std::abs(c(1) * c(1) + c(3) * c(3) - 1.0) < 1e-6);
  CHECK(std::abs(2.0 * c(2) * c(2) - 1.0) < 1e-12);
}

TEST_CASE("coefficients are even and satisfy the pairing rule for every supported K") {
  for (int K : {2, 3, 4}) {
    CAPTURE(K);
    const FreqCoeffs c = design_coeffs(K);
    CHECK(c.num_taps() == 2 * K - 1);
    for (int k = 1; k < K; ++k) {
      CHECK(c(-k) == c(k));
      CHECK(std::abs(c(k) * c(k) + c(K - k) * c(K - k) - 1.0) < 1e-6);
    }
    CHECK(c.energy() == doctest::Approx(double(K)).epsilon(1e-6));
  }
}

TEST_CASE("K=2 is forced to c_1 = 1/sqrt(2)") {
  const FreqCoeffs c = design_coeffs(2);
  CHECK(c(1) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("unsupported K is rejected") {
  CHECK_THROWS_AS(design_coeffs(1), std::invalid_argument);
  CHECK_THROWS_AS(design_coeffs(5), std::invalid_argument);
  CHECK_THROWS_AS(design_coeffs(0), std::invalid_argument);
}

TEST_CASE("time prototype peaks at the window center with value c0 + 2 sum c_k") {
  const FreqCoeffs c = design_coeffs(4);
  const PrototypeFilter p = synth_time_filter(c, 16);
  REQUIRE(p.length == 64);
  REQUIRE(p.taps.size() == 64u);
  const double peak = c(0) + 2.0 * (c(1) + c(2) + c(3));
  CHECK(peak == doctest::Approx(4.828428).epsilon(1e-6));
  CHECK(p.taps[32] == doctest::Approx(peak).epsilon(1e-12));
  for (int n = 0; n < 64; ++n) CHECK(std::abs(p.taps[n]) <= peak + 1e-12);
  CHECK(p.imag_residual < 1e-12);
}

TEST_CASE("time prototype is symmetric: taps(n) = taps(N - n)") {
  const PrototypeFilter p = synth_time_filter(design_coeffs(4), 16);
  for (int n = 1; n < 64; ++n) CHECK(p.taps[n] == doctest::Approx(p.taps[64 - n]).epsilon(1e-12));
}

TEST_CASE("prototype matches a direct cosine sum") {
  const FreqCoeffs c = design_coeffs(3);
  const int L = 8, N = 24;
  const PrototypeFilter p = synth_time_filter(c, L);
  for (int n = 0; n < N; ++n) {
    double ref = 0.0;
    for (int k = -2; k <= 2; ++k) ref += c(k) * std::cos(2.0 * std::numbers::pi * k * (n - N / 2) / N);
    CHECK(p.taps[n] == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("autocorrelation vanishes at multiples of L") {
  const PrototypeFilter p = synth_time_filter(design_coeffs(4), 16);
  // Direct convolution oracle.
  auto q = [&](int d) {
    double acc = 0.0;
    for (int n = 0; n < 64; ++n)
      if (n - d >= 0 && n - d < 64) acc += p.taps[n] * p.taps[n - d];
    return acc;
  };
  CHECK(autocorrelation(p, 16) == doctest::Approx(q(16)).epsilon(1e-12));
  CHECK(std::abs(q(16)) / q(0) < 1e-3);
  CHECK(std::abs(q(32)) / q(0) < 1e-3);
  CHECK(nyquist_residual(p) < 1e-3);
}

TEST_CASE("odd L is rejected") {
  CHECK_THROWS_AS(synth_time_filter(design_coeffs(4), 15), std::invalid_argument);
}

TEST_CASE("spreading matrix column 0 wraps around bin 0") {
  const FreqCoeffs c = design_coeffs(4);
  const SpreadingMatrix A = build_spreading(c, 16);
  REQUIRE(A.rows() == 64);
  REQUIRE(A.cols() == 16);
  const int rows[] = {61, 62, 63, 0, 1, 2, 3};
  const double vals[] = {c(3), c(2), c(1), c(0), c(1), c(2), c(3)};
  for (int i = 0; i < 7; ++i) CHECK(A.dense()(rows[i], 0) == vals[i]);
  CHECK(A.bin(0, -3) == 61);
  CHECK(A.bin(15, 3) == 63);
  CHECK(A.center_bin(5) == 20);
}

TEST_CASE("spreading matrix has 2K-1 nonzeros per column and matches the oracle") {
  const FreqCoeffs c = design_coeffs(4);
  const SpreadingMatrix A = build_spreading(c, 16);
  for (int m = 0; m < 16; ++m) CHECK((A.dense().col(m).array() != 0.0).count() == 7);
  CHECK((A.dense() - oracle::spreading(c, 16)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("A^T A has constant diagonal sum c_k^2") {
  const FreqCoeffs c = design_coeffs(4);
  const Eigen::MatrixXd A = build_spreading(c, 8).dense();
  const Eigen::MatrixXd G = A.transpose() * A;
  double energy = 0.0;
  for (int k = -3; k <= 3; ++k) energy += c(k) * c(k);
  for (int m = 0; m < 8; ++m) CHECK(G(m, m) == doctest::Approx(energy).epsilon(1e-12));
}

TEST_CASE("phase matrix") {
  SUBCASE("L=4 gives 1, j, -1, -j exactly") {
    const PhaseMatrix P = build_phase(4);
    CHECK(P[0] == cplx(1, 0));
    CHECK(P[1] == cplx(0, 1));
    CHECK(P[2] == cplx(-1, 0));
    CHECK(P[3] == cplx(0, -1));
  }
  SUBCASE("inverse is the conjugate transpose") {
    const Eigen::MatrixXcd D = build_phase(12).dense();
    CHECK((D * D.adjoint() - Eigen::MatrixXcd::Identity(12, 12)).norm() < 1e-15);
  }
  SUBCASE("L=1 is the identity") {
    const PhaseMatrix P = build_phase(1);
    REQUIRE(P.size() == 1);
    CHECK(P[0] == cplx(1, 0));
  }
}

TEST_CASE("j_pow handles negative exponents") {
  CHECK(j_pow(-1) == cplx(0, -1));
  CHECK(j_pow(7) == cplx(0, -1));
  CHECK(j_pow(-6) == cplx(-1, 0));
}

}
