#include <doctest.h>

#include <cmath>
#include <complex>

#include "catspec/constants.hpp"
#include "catspec/hilbert.hpp"
#include "catspec/rng.hpp"

using namespace catspec;
using hilbert::Complex;
using hilbert::SpinBosonState;
using constants::pi;

namespace {

// Random normalized state from a fixed-seed generator.
SpinBosonState random_state(rng::SplitRng& gen, int cutoff) {
  Eigen::Matrix2Xcd amps(2, cutoff);
  for (int s = 0; s < 2; ++s) {
    for (int n = 0; n < cutoff; ++n) {
      // decaying envelope keeps leakage negligible
      const double scale = std::exp(-0.4 * n);
      amps(s, n) = scale * Complex(gen.uniform(-1, 1), gen.uniform(-1, 1));
    }
  }
  return SpinBosonState(amps).renormalized();
}

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("zero displacement is the identity") {
  rng::SplitRng gen(11);
  const auto psi = random_state(gen, 32);
  const auto out = hilbert::displaced(psi, 0.0);
  CHECK((out.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vacuum overlap of a displaced vacuum is exp(-|a|^2/2)") {
  const auto vac = SpinBosonState::ground(64);
  const auto disp = hilbert::displaced(vac, 1.0);
  CHECK(std::abs(vac.overlap(disp)) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
}

TEST_CASE("displacement group law") {
  // D(a) D(b) = exp((a b* - a* b)/2) D(a+b); left side as a product of
  // two independently exponentiated operators.
  const Complex a{0.3, 0.1};
  const Complex b{0.0, -0.2};
  const int n = 64;
  const auto vac = SpinBosonState::ground(n);
  const auto lhs = hilbert::displaced(hilbert::displaced(vac, b), a);
  const Complex phase = std::exp((a * std::conj(b) - std::conj(a) * b) / 2.0);
  const auto rhs = hilbert::displaced(vac, a + b);
  CHECK((lhs.amplitudes() - phase * rhs.amplitudes()).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("inverse displacement restores the state") {
  rng::SplitRng gen(22);
  for (int rep = 0; rep < 4; ++rep) {
    const auto psi = random_state(gen, 64);
    const Complex amp(gen.uniform(-1.5, 1.5), gen.uniform(-1.5, 1.5));
    const auto back = hilbert::displaced(hilbert::displaced(psi, amp), -amp);
    CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("norm is preserved by every operation") {
  rng::SplitRng gen(33);
  auto psi = SpinBosonState::ground(64);
  for (int step = 0; step < 20; ++step) {
    switch (step % 4) {
      case 0:
        psi = hilbert::displaced(psi,
                                 Complex(gen.uniform(-1, 1), gen.uniform(-1, 1)));
        break;
      case 1:
        psi = hilbert::rotated(psi, hilbert::Axis::x, gen.uniform(0, 2 * pi));
        break;
      case 2:
        psi = hilbert::spin_conditional_displaced(
            psi, Complex(gen.uniform(-0.5, 0.5), gen.uniform(-0.5, 0.5)));
        break;
      case 3:
        psi = hilbert::rotated(psi, hilbert::Axis::z, gen.uniform(0, 2 * pi));
        break;
    }
    CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("rotations compose additively") {
  rng::SplitRng gen(44);
  const auto psi = random_state(gen, 16);
  for (auto axis : {hilbert::Axis::x, hilbert::Axis::y, hilbert::Axis::z}) {
    const double t1 = gen.uniform(0, 2 * pi);
    const double t2 = gen.uniform(0, 2 * pi);
    const auto two = hilbert::rotated(hilbert::rotated(psi, axis, t1), axis, t2);
    const auto one = hilbert::rotated(psi, axis, t1 + t2);
    CHECK((two.amplitudes() - one.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("2 pi spin rotation flips the global sign only") {
  const auto psi = SpinBosonState::ground(8);
  const auto out = hilbert::rotated(psi, hilbert::Axis::x, 2 * pi);
  CHECK(std::abs(psi.overlap(out) - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(out.population_down() == doctest::Approx(0.0));
}

TEST_CASE("halfets: R_x(pi/2) and R_y(pi) from spin up") {
  const auto psi = SpinBosonState::ground(8);
  CHECK(hilbert::rotated(psi, hilbert::Axis::x, pi / 2).population_down() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hilbert::rotated(psi, hilbert::Axis::y, pi).population_down() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("readout of a rotated spin state") {
  // cos(Phi)|up> + sin(Phi)|down> measured in z gives sin^2(Phi).
  const double phi = pi / 4;
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(8);
  vac(0) = 1.0;
  const auto psi =
      SpinBosonState::with_motion(std::cos(phi), std::sin(phi), vac);
  CHECK(hilbert::measure_down(psi, hilbert::Basis::z) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hilbert::measure_down(SpinBosonState::ground(8),
                              hilbert::Basis::z) == doctest::Approx(0.0));
}

TEST_CASE("coherent state basics") {
  const auto zero = hilbert::coherent_state(0.0, 16);
  CHECK(std::abs(zero.amplitudes()(0, 0) - 1.0) < 1e-15);

  const auto two = hilbert::coherent_state(2.0, 64);
  CHECK(two.mean_occupation() == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("large coherent state fits well inside a 200-level space") {
  const double a = 6.5;
  const auto psi = hilbert::coherent_state(a, 200, 0, 1e-8);
  // Independent tail bound: direct Poisson summation over the top 10%.
  double log_term = -a * a;  // log of e^{-|a|^2} |a|^{2n} / n! at n = 0
  double tail = 0.0;
  for (int n = 1; n < 320; ++n) {
    log_term += 2.0 * std::log(a) - std::log(static_cast<double>(n));
    if (n >= 180) tail += std::exp(log_term);
  }
  CHECK(tail < 1e-8);
  CHECK(psi.leakage() < 1e-8);
}

TEST_CASE("matrix exponential agrees with analytic coherent amplitudes") {
  const Complex amp{1.3, -0.7};
  const auto via_matrix =
      hilbert::displaced(SpinBosonState::ground(64), amp);
  const auto analytic = hilbert::coherent_state(amp, 64);
  CHECK(via_matrix.fidelity(analytic) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("small displacement approaches the one-phonon form") {
  // D(i eta)|0> = |0> + i eta |1> + O(eta^2); the exact operator is used
  // everywhere, this documents the limit.
  const double eta = 0.02;
  const auto exact = hilbert::displaced(SpinBosonState::ground(32),
                                        Complex(0.0, eta));
  Eigen::VectorXcd approx = Eigen::VectorXcd::Zero(32);
  approx(0) = 1.0;
  approx(1) = Complex(0.0, eta);
  approx /= approx.norm();
  const auto first_order = SpinBosonState::with_motion(1.0, 0.0, approx);
  CHECK(1.0 - exact.fidelity(first_order) < 2.0 * eta * eta);
}

TEST_CASE("truncation and amplitude guards") {
  CHECK_THROWS_AS(hilbert::displaced(SpinBosonState::ground(32), 6.0),
                  TruncationError);
  CHECK_THROWS_AS(hilbert::coherent_state(6.0, 32), TruncationError);
  CHECK_THROWS_AS(
      hilbert::displaced(SpinBosonState::ground(8),
                         Complex(std::nan(""), 0.0)),
      InvalidAmplitude);
  CHECK(hilbert::auto_cutoff(6.5) == 103);
}

}  // TEST_SUITE
