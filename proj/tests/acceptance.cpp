// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Criteria cover the exact-simulation oracle, the
// closed-form calibration curve, two-level pulse dynamics, the
// vibrational eigensolver, decoherence timing, the simulated spectrum,
// Monte-Carlo statistics, byte-level determinism, and the probability
// round trip.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "catspec/catseq.hpp"
#include "catspec/config.hpp"
#include "catspec/constants.hpp"
#include "catspec/experiment.hpp"
#include "catspec/molecule.hpp"
#include "catspec/runs.hpp"
#include "catspec/vibsolver.hpp"

using namespace catspec;
using constants::atomic_mass_unit;
using constants::hbar;
using constants::pi;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("%s  %d  %-22s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 1. Exact Fock-space sequence versus sin(4 eta |alpha|), tolerance 1e-3.
void criterion_oracle_equivalence() {
  Timer timer;
  double worst = 0.0;
  for (double eta : {0.0193, 0.04, 0.06}) {
    for (double alpha : {2.0, 4.0, 6.5}) {
      catseq::SequenceSpec seq;
      seq.cat = catseq::CatParams::from_alpha(alpha);
      seq.recoils = {catseq::RecoilEvent{eta, 0.0, 0.0}};
      seq.fock_cutoff = 200;
      const auto scan = catseq::phase_scan(seq, 16);
      worst = std::max(worst, std::abs(scan.peak_to_peak -
                                       std::sin(4.0 * eta * alpha)));
    }
  }
  const double elapsed = timer.seconds();
  report(1, "oracle-equivalence", worst < 1e-3 && elapsed < 120.0,
         fmt("max |S_dense - sin(4 eta a)| = %.2e (tol 1e-3), %.1f s",
             worst, elapsed));
}

// 2. Kick-calibration values and dominance over the direct baseline.
void criterion_kick_calibration() {
  const catseq::DecoherenceModel model(0.52, 0.88e-3);
  const double s1 = catseq::analytic_signal(0.0193, 6.5, model, 0.0);
  const double expected = 0.52 * std::sin(4.0 * 0.0193 * 6.5);
  const double value_err = std::abs(s1 - expected);

  bool dominates = true;
  for (double eta = 1e-4; eta <= 0.1 + 1e-12; eta += 1e-4) {
    if (catseq::analytic_signal(eta, 6.5, model, 0.0) <=
        catseq::direct_signal(eta)) {
      dominates = false;
      break;
    }
  }
  report(2, "kick-calibration",
         value_err < 1e-6 && std::abs(s1 - 0.250) < 1e-3 && dominates,
         fmt("S(1 kick) = %.6f (err %.1e), exceeds 2*eta on (0, 0.1]: %s",
             s1, value_err, dominates ? "yes" : "no"));
}

// 3. Resonant pulse-area theorem to 1e-6.
void criterion_area_theorem() {
  Timer timer;
  const molecule::MolecularTransition transition(3783.0, 3.7e-5);
  const double tau_sigma = 50e-15;
  double worst = 0.0;
  for (double area : {pi / 4, pi / 2, pi}) {
    molecule::PulseParams p;
    p.tau_sigma = tau_sigma;
    p.e0 = area * hbar /
           (4.0 * transition.dipole() * tau_sigma * std::sqrt(pi));
    const auto out =
        molecule::propagate_pulse(molecule::TlsState{}, p, transition);
    worst = std::max(
        worst, std::abs(out.p_excited() - std::sin(area / 2) * std::sin(area / 2)));
  }
  const double elapsed = timer.seconds();
  report(3, "area-theorem", worst < 1e-6 && elapsed < 1.0,
         fmt("max |P_e - sin^2(area/2)| = %.2e (tol 1e-6), %.2f s", worst,
             elapsed));
}

// 4. Vibrational eigensolver against harmonic and Morse closed forms.
void criterion_dvr() {
  Timer timer;

  vibsolver::Curve1D harmonic;
  harmonic.reduced_mass = 1.0 * atomic_mass_unit;
  const double omega = units::cm1_to_omega(3950.0);
  const double ell = std::sqrt(hbar / (harmonic.reduced_mass * omega));
  const int nh = 701;
  harmonic.grid.resize(nh);
  harmonic.values.resize(nh);
  for (int i = 0; i < nh; ++i) {
    const double x = -12.0 * ell + 24.0 * ell * i / (nh - 1);
    harmonic.grid(i) = x;
    harmonic.values(i) =
        0.5 * harmonic.reduced_mass * omega * omega * x * x;
  }
  const auto hl = vibsolver::dvr_solve(harmonic, 10);
  double worst_h = 0.0;
  for (int n = 0; n < 10; ++n) {
    worst_h = std::max(worst_h,
                       std::abs(units::joule_to_cm1(hl.energies(n)) -
                                3950.0 * (n + 0.5)));
  }

  // Morse well with the same harmonic frequency, depth 43000 cm^-1.
  const double d_e = units::cm1_to_joule(43000.0);
  const double mass = 0.9481 * atomic_mass_unit;
  const double a = units::cm1_to_omega(3950.0) / std::sqrt(2.0 * d_e / mass);
  vibsolver::Curve1D morse;
  morse.reduced_mass = mass;
  const int nm = 1201;
  morse.grid.resize(nm);
  morse.values.resize(nm);
  for (int i = 0; i < nm; ++i) {
    const double x = -1.15 / a + (4.25 / a) * i / (nm - 1);
    const double y = 1.0 - std::exp(-a * x);
    morse.grid(i) = x;
    morse.values(i) = d_e * y * y;
  }
  const auto ml = vibsolver::dvr_solve(morse, 5);
  const double we = hbar * a * std::sqrt(2.0 * d_e / mass);
  double worst_m = 0.0;
  for (int n = 0; n < 5; ++n) {
    const double k = n + 0.5;
    const double closed = we * k - we * we / (4.0 * d_e) * k * k;
    worst_m = std::max(worst_m, std::abs(units::joule_to_cm1(
                                    ml.energies(n)) -
                                units::joule_to_cm1(closed)));
  }

  const double elapsed = timer.seconds();
  report(4, "dvr-levels",
         worst_h < 0.01 && worst_m < 0.05 && elapsed < 5.0,
         fmt("harmonic err %.4f cm^-1 (tol 0.01), Morse err %.4f cm^-1 "
             "(tol 0.05), %.1f s",
             worst_h, worst_m, elapsed));
}

// 5. Contrast decay over the 34-pulse train duration.
void criterion_decoherence_timing() {
  const catseq::DecoherenceModel model(0.52, 0.88e-3);
  const double ratio = model.factor(0.34e-3) / model.s_max;
  const double expected = std::exp(-0.34 / 0.88);
  const double err = std::abs(ratio - expected);
  report(5, "decoherence-timing", err < 1e-12,
         fmt("S_max(0.34 ms)/S_max = %.12f, err %.1e (tol 1e-12)", ratio,
             err));
}

// 6. Simulated absorption spectrum: peak location and far-detuned zero.
void criterion_spectrum() {
  Timer timer;
  const int n_trials = 20000;

  experiment::SpectrumScanInputs in;
  for (double nu = 3600.0; nu <= 4000.0 + 1e-9; nu += 25.0) {
    in.points.push_back({nu, 126.7});
  }
  in.train.nu_center_cm1 = 3783.0;
  in.train.fwhm_cm1 = 126.7;
  in.train.i_avg = 1.1e8;
  in.train.f_rep = 100e3;
  in.train.n_pulse = 34;
  in.transition = molecule::MolecularTransition(3783.0, 3.7e-5);
  in.cat = catseq::CatParams::from_alpha(6.5);
  in.decoherence = catseq::DecoherenceModel(0.52, 0.88e-3);
  const double m1 = 40 * atomic_mass_unit, m2 = 57 * atomic_mass_unit;
  in.ions = crystal::solve_modes(
      m1, m2, crystal::omega_single_for_in_phase(m1, m2, 2 * pi * 400e3));
  in.n_trials = n_trials;
  in.seed = 20260809;
  const auto scan = experiment::spectrum_scan(in);

  double peak_x = 0, peak_p = -1;
  for (const auto& p : scan.points) {
    if (p.p_abs_eff > peak_p) {
      peak_p = p.p_abs_eff;
      peak_x = p.x;
    }
  }
  const bool peak_ok = std::abs(peak_x - 3783.0) <= 25.0 + 1e-9;

  // Ten linewidths below the line center.
  experiment::SpectrumScanInputs far = in;
  far.points = {{3783.0 - 10.0 * 126.7, 126.7}};
  const auto far_scan = experiment::spectrum_scan(far);
  const auto& fp = far_scan.points[0];
  // Consistent with zero at three standard errors, with an absolute
  // floor of 1e-12 marking double-precision zero.
  const bool far_ok =
      fp.p_abs_eff <= std::max(3.0 * fp.stderr_mean, 1e-12);

  const double elapsed = timer.seconds();
  report(6, "spectrum-shape",
         peak_ok && far_ok && elapsed < 1800.0,
         fmt("peak at %.0f cm^-1 (target 3783 +/- 25), far point p = %.2e "
             "(3 se = %.2e), %d trials/pt, %.0f s",
             peak_x, fp.p_abs_eff, 3.0 * fp.stderr_mean, n_trials, elapsed));
}

// 7. Standard error scaling between 1000 and 4000 trials.
void criterion_mc_statistics() {
  molecule::PulseTrainSpec train;
  train.nu_center_cm1 = 3703.3;
  train.fwhm_cm1 = 126.7;
  train.i_avg = 1.1e8;
  train.f_rep = 100e3;
  train.n_pulse = 4;
  const molecule::MolecularTransition transition(3783.0, 3.7e-5);
  const auto small =
      molecule::ensemble_absorption(train, transition, 1000, 11);
  const auto large =
      molecule::ensemble_absorption(train, transition, 4000, 12);
  const double ratio = small.stderr_mean / large.stderr_mean;
  report(7, "mc-statistics", ratio > 1.6 && ratio < 2.4,
         fmt("se(1000)/se(4000) = %.3f (expected 2.0 +/- 20%%)", ratio));
}

// 8. Byte-identical outputs for identical configuration and seed.
void criterion_determinism() {
  config::RunConfig c = config::RunConfig::paper_defaults();
  c.set("run.n_trials", "200");
  c.set("laser.n_pulse", "4");
  c.set("run.pulse_list", "1,2,4");
  const auto resolved_a = config::resolve(c);
  const auto resolved_b = config::resolve(c);
  bool identical = true;
  std::string which = "all subcommands";
  for (const std::string sub : {"signal", "modes", "kickscan", "pulsescan"}) {
    const auto a = runs::dispatch(sub, resolved_a);
    const auto b = runs::dispatch(sub, resolved_b);
    if (a.files.size() != b.files.size()) identical = false;
    for (std::size_t i = 0; identical && i < a.files.size(); ++i) {
      if (a.files[i].content != b.files[i].content) {
        identical = false;
        which = sub;
      }
    }
    if (!identical) break;
  }
  report(8, "determinism", identical,
         identical ? "repeated runs byte-identical (" + which + ")"
                   : "mismatch in subcommand " + which);
}

// 9. Probability round trip through the signal ratio.
void criterion_round_trip() {
  const catseq::DecoherenceModel model(0.52, 0.88e-3);
  double worst = 0.0;
  for (double p_exc : {1e-9, 1e-4, 0.037, 0.25, 0.5, 0.99}) {
    for (double t : {0.0, 0.1e-3, 0.34e-3}) {
      const double s_ref = experiment::reference_signal(0.028, 6.5, model, t);
      const double back =
          experiment::absorption_probability(p_exc * s_ref, s_ref);
      worst = std::max(worst, std::abs(back - p_exc) / p_exc);
    }
  }
  report(9, "ratio-round-trip", worst < 1e-12,
         fmt("max relative error %.2e (tol 1e-12)", worst));
}

}  // namespace

int main() {
  std::printf("catspec acceptance suite\n");
  criterion_oracle_equivalence();
  criterion_kick_calibration();
  criterion_area_theorem();
  criterion_dvr();
  criterion_decoherence_timing();
  criterion_spectrum();
  criterion_mc_statistics();
  criterion_determinism();
  criterion_round_trip();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
