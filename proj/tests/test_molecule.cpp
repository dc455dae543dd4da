#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "catspec/constants.hpp"
#include "catspec/molecule.hpp"
#include "catspec/rng.hpp"

using namespace catspec;
using molecule::IntegrationOptions;
using molecule::MolecularTransition;
using molecule::PulseParams;
using molecule::PulseTrainSpec;
using molecule::TlsState;
using constants::hbar;
using constants::pi;

namespace {

const MolecularTransition kOhStretch{3783.0, 3.7e-5};

PulseTrainSpec reference_train(int n_pulse) {
  PulseTrainSpec spec;
  spec.nu_center_cm1 = 3703.3;
  spec.fwhm_cm1 = 126.7;
  spec.i_avg = 1.1e4 * 1e4;  // W/cm^2 -> W/m^2
  spec.f_rep = 100e3;
  spec.n_pulse = n_pulse;
  return spec;
}

// Peak field for a requested resonant pulse area at theta = 0.
double field_for_area(double area, double tau_sigma,
                      const MolecularTransition& t) {
  return area * hbar / (4.0 * t.dipole() * tau_sigma * std::sqrt(pi));
}

// Independent fixed-step RK4 written directly against the ODE, with its
// own envelope evaluation; used as the high-resolution oracle.
double oracle_p_excited(const PulseParams& p, const MolecularTransition& t,
                        int steps, double window_sigmas) {
  using C = std::complex<double>;
  const double rabi = 2.0 * t.dipole() * p.e0 * std::cos(p.theta) / hbar;
  const C phase = std::exp(C(0, 1) * p.phase);
  auto rhs = [&](double time, const std::array<C, 2>& c) {
    const double w =
        rabi * std::exp(-time * time / (4.0 * p.tau_sigma * p.tau_sigma));
    return std::array<C, 2>{
        C(0, -1) * (p.detuning * c[0] + 0.5 * w * std::conj(phase) * c[1]),
        C(0, -1) * (0.5 * w * phase * c[0])};
  };
  std::array<C, 2> c{1.0, 0.0};
  const double t0 = -window_sigmas * p.tau_sigma;
  const double h = 2.0 * window_sigmas * p.tau_sigma / steps;
  for (int k = 0; k < steps; ++k) {
    const double time = t0 + k * h;
    const auto k1 = rhs(time, c);
    const auto k2 = rhs(time + h / 2,
                        {c[0] + h / 2 * k1[0], c[1] + h / 2 * k1[1]});
    const auto k3 = rhs(time + h / 2,
                        {c[0] + h / 2 * k2[0], c[1] + h / 2 * k2[1]});
    const auto k4 = rhs(time + h, {c[0] + h * k3[0], c[1] + h * k3[1]});
    c[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    c[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  }
  return std::norm(c[1]);
}

}  // namespace

TEST_SUITE("molecule") {

TEST_CASE("transition dipole from the oscillator strength") {
  // mu = sqrt(f 3 hbar e^2 / (m_e omega0)); inverting must return f.
  const double mu = kOhStretch.dipole();
  const double f_back = constants::electron_mass * kOhStretch.omega0() * mu *
                        mu /
                        (3.0 * hbar * constants::elementary_charge *
                         constants::elementary_charge);
  CHECK(f_back == doctest::Approx(kOhStretch.f_eg).epsilon(1e-12));
  CHECK(mu / constants::debye == doctest::Approx(0.204).epsilon(0.01));
}

TEST_CASE("transform-limited duration from the linewidth") {
  PulseTrainSpec spec = reference_train(1);
  const double tau = spec.fwhm_duration();
  const double expected =
      2.0 * std::numbers::ln2 /
      (pi * constants::speed_of_light * 100.0 * 126.7);
  CHECK(tau == doctest::Approx(expected).epsilon(1e-12));
  CHECK(tau * 1e15 == doctest::Approx(116.2).epsilon(1e-3));
}

TEST_CASE("resonant pulse areas follow sin^2(area/2)") {
  const double tau_sigma = 50e-15;
  for (double area : {pi / 4, pi / 2, pi}) {
    PulseParams p;
    p.tau_sigma = tau_sigma;
    p.e0 = field_for_area(area, tau_sigma, kOhStretch);
    p.detuning = 0.0;
    p.phase = 0.3;
    p.theta = 0.0;
    const TlsState out = molecule::propagate_pulse(TlsState{}, p, kOhStretch);
    const double expected = std::sin(area / 2) * std::sin(area / 2);
    CHECK(std::abs(out.p_excited() - expected) < 1e-6);
  }
}

TEST_CASE("perpendicular orientation decouples the field") {
  PulseParams p;
  p.tau_sigma = 50e-15;
  p.e0 = field_for_area(pi, p.tau_sigma, kOhStretch);
  p.theta = pi / 2;
  const TlsState out = molecule::propagate_pulse(TlsState{}, p, kOhStretch);
  CHECK(out.p_excited() == doctest::Approx(0.0));
  CHECK(std::abs(out.c_g - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("detuned pulse agrees with an independent high-resolution oracle") {
  PulseTrainSpec spec = reference_train(1);
  PulseParams p;
  p.tau_sigma = spec.tau_sigma();
  p.e0 = spec.peak_field();
  p.detuning = units::cm1_to_omega(100.0);  // 100 cm^-1 detuning
  p.phase = 1.1;
  p.theta = 0.4;
  const TlsState out = molecule::propagate_pulse(TlsState{}, p, kOhStretch);
  const double reference = oracle_p_excited(p, kOhStretch, 40000, 10.0);
  CHECK(std::abs(out.p_excited() - reference) < 1e-6);
}

TEST_CASE("excitation is even in the detuning") {
  PulseTrainSpec spec = reference_train(1);
  PulseParams p;
  p.tau_sigma = spec.tau_sigma();
  p.e0 = spec.peak_field();
  p.theta = 0.0;
  for (double detuning_cm1 : {30.0, 80.0, 150.0}) {
    p.detuning = units::cm1_to_omega(detuning_cm1);
    const double plus =
        molecule::propagate_pulse(TlsState{}, p, kOhStretch).p_excited();
    p.detuning = -p.detuning;
    const double minus =
        molecule::propagate_pulse(TlsState{}, p, kOhStretch).p_excited();
    CHECK(plus == doctest::Approx(minus).epsilon(1e-8));
  }
}

TEST_CASE("small-area response falls off beyond the pulse bandwidth") {
  PulseParams p;
  p.tau_sigma = 50e-15;
  p.e0 = field_for_area(0.1, p.tau_sigma, kOhStretch);
  p.theta = 0.0;
  const double bandwidth = 1.0 / p.tau_sigma;
  double previous = 1.0;
  for (double factor : {1.5, 2.5, 3.5, 4.5}) {
    p.detuning = factor * bandwidth;
    const double pe =
        molecule::propagate_pulse(TlsState{}, p, kOhStretch).p_excited();
    CHECK(pe < previous);
    previous = pe;
  }
}

TEST_CASE("trials are reproducible and bounded") {
  const PulseTrainSpec spec = reference_train(34);

  const auto r1 = molecule::run_trial(spec, kOhStretch, 987654321);
  const auto r2 = molecule::run_trial(spec, kOhStretch, 987654321);
  REQUIRE(r1.p_e_after_pulse.size() == 34);
  for (int j = 0; j < 34; ++j) {
    CHECK(r1.p_e_after_pulse[j] == r2.p_e_after_pulse[j]);  // bitwise
  }
  CHECK(r1.first_excitation_pulse == r2.first_excitation_pulse);

  const auto r3 = molecule::run_trial(spec, kOhStretch, 123);
  bool any_different = false;
  for (int j = 0; j < 34; ++j) {
    any_different |= r3.p_e_after_pulse[j] != r1.p_e_after_pulse[j];
  }
  CHECK(any_different);

  PulseTrainSpec empty = spec;
  empty.n_pulse = 0;
  CHECK(molecule::run_trial(empty, kOhStretch, 1).final_p_e() == 0.0);
}

TEST_CASE("fast trial path matches direct single-pulse propagation") {
  const PulseTrainSpec spec = reference_train(5);
  const std::uint64_t seed = 20251234;
  const auto record = molecule::run_trial(spec, kOhStretch, seed);

  // Replay the same draws through the public single-pulse operation.
  rng::SplitRng gen(seed);
  PulseParams p;
  p.e0 = spec.peak_field();
  p.tau_sigma = spec.tau_sigma();
  p.detuning = spec.detuning(kOhStretch);
  p.theta = std::acos(1.0 - 2.0 * gen.uniform());
  TlsState state;
  IntegrationOptions opts;
  opts.verify = false;
  for (int j = 0; j < spec.n_pulse; ++j) {
    p.phase = gen.uniform(0.0, 2.0 * pi);
    state = molecule::propagate_pulse(state, p, kOhStretch, opts);
    CHECK(std::abs(state.p_excited() - record.p_e_after_pulse[j]) < 1e-12);
  }
}

TEST_CASE("orientation resampling modes are distinct and reproducible") {
  const PulseTrainSpec spec = reference_train(8);
  molecule::TrialOptions per_trial;
  molecule::TrialOptions per_pulse;
  per_pulse.orientation = molecule::OrientationMode::per_pulse;

  const auto a1 = molecule::run_trial(spec, kOhStretch, 5, per_trial);
  const auto b1 = molecule::run_trial(spec, kOhStretch, 5, per_pulse);
  const auto b2 = molecule::run_trial(spec, kOhStretch, 5, per_pulse);
  for (int j = 0; j < 8; ++j) {
    CHECK(b1.p_e_after_pulse[j] == b2.p_e_after_pulse[j]);
  }
  // redrawing theta consumes different random numbers, so the
  // trajectories diverge after the first pulse
  CHECK(b1.p_e_after_pulse.back() != a1.p_e_after_pulse.back());
}

TEST_CASE("ensemble statistics") {
  SUBCASE("dark laser never excites") {
    PulseTrainSpec spec = reference_train(3);
    spec.i_avg = 0.0;
    const auto r = molecule::ensemble_absorption(spec, kOhStretch, 50, 42);
    CHECK(r.mean == 0.0);
  }

  SUBCASE("aligned resonant pi pulse excites every trial") {
    PulseTrainSpec spec = reference_train(1);
    spec.nu_center_cm1 = kOhStretch.nu0_cm1;
    // set the intensity for a pi area at theta = 0
    const double tau = spec.fwhm_duration();
    const double tau_sigma = spec.tau_sigma();
    const double e0 = field_for_area(pi, tau_sigma, kOhStretch);
    spec.i_avg = e0 * e0 * spec.f_rep * tau *
                 std::sqrt(pi / std::numbers::ln2) * constants::eps0 *
                 constants::speed_of_light;
    molecule::TrialOptions opts;
    opts.orientation = molecule::OrientationMode::fixed;
    opts.fixed_theta = 0.0;
    const auto r =
        molecule::ensemble_absorption(spec, kOhStretch, 20, 42, opts);
    CHECK(r.mean == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.stderr_mean < 1e-9);
  }

  SUBCASE("standard error scales as the inverse root of the trial count") {
    const PulseTrainSpec spec = reference_train(4);
    const auto small = molecule::ensemble_absorption(spec, kOhStretch, 400, 1);
    const auto large =
        molecule::ensemble_absorption(spec, kOhStretch, 1600, 2);
    const double ratio = small.stderr_mean / large.stderr_mean;
    CHECK(ratio > 2.0 * 0.8);
    CHECK(ratio < 2.0 * 1.2);
  }

  SUBCASE("per-pulse record ends at the ensemble mean") {
    const PulseTrainSpec spec = reference_train(6);
    const auto curve =
        molecule::ensemble_per_pulse(spec, kOhStretch, 64, 9);
    const auto direct =
        molecule::ensemble_absorption(spec, kOhStretch, 64, 9);
    REQUIRE(curve.size() == 6);
    CHECK(curve.back().mean == direct.mean);
    CHECK(curve.back().stderr_mean == direct.stderr_mean);
  }
}

TEST_CASE("reference-scale train reproduces the frozen ensemble value") {
  // Self-consistency regression for the full reference parameter set:
  // value frozen from a 100000-trial run (seed 1), quoted with its
  // standard error. A fresh run with a different seed must agree within
  // combined statistical error.
  const double frozen_mean = 0.437003;
  const double frozen_se = 0.000958;
  const auto r =
      molecule::ensemble_absorption(reference_train(34), kOhStretch, 4000, 77);
  const double sigma =
      std::sqrt(frozen_se * frozen_se + r.stderr_mean * r.stderr_mean);
  CHECK(std::abs(r.mean - frozen_mean) < 4.0 * sigma);
}

TEST_CASE("source spectrum center and width extraction") {
  const char* path = "test_spectrum_tmp.csv";
  {
    std::ofstream out(path);
    out << "wavenumber_cm1,intensity\n";
    for (int i = 0; i <= 200; ++i) {
      const double nu = 3500.0 + i * 4.0;
      const double x = (nu - 3710.0) / 90.0;
      out << nu << "," << std::exp(-0.5 * x * x) << "\n";
    }
  }
  const auto s = molecule::spectrum_from_csv(path);
  std::remove(path);
  CHECK(s.center_cm1 == doctest::Approx(3710.0).epsilon(1e-3));
  // FWHM of the sampled Gaussian: 2 sqrt(2 ln 2) * 90.
  CHECK(s.fwhm_cm1 ==
        doctest::Approx(2.0 * std::sqrt(2.0 * std::numbers::ln2) * 90.0)
            .epsilon(0.01));
}

TEST_CASE("pulse train validation") {
  PulseTrainSpec spec = reference_train(1);
  spec.fwhm_s = 100e-15;  // both linewidth and duration set
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.fwhm_cm1.reset();
  CHECK_NOTHROW(spec.validate());
  spec.fwhm_s.reset();
  CHECK_THROWS_AS(spec.validate(), ConfigError);

  PulseParams p;
  p.tau_sigma = 50e-15;
  IntegrationOptions opts;
  opts.window_sigmas = 3;
  CHECK_THROWS_AS(molecule::propagate_pulse(TlsState{}, p, kOhStretch, opts),
                  DomainError);
}

}  // TEST_SUITE
