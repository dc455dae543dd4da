#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "catspec/hilbert.hpp"

// The recoil-amplified detection sequence: entangle the spin with two
// oppositely displaced wavepackets, let a small displacement act, undo
// the entangling step and read the accumulated geometric phase off the
// spin. Both the exact Fock-space evolution and the closed-form signal
// model live here.
namespace catspec::catseq {

using hilbert::Complex;
using hilbert::SpinBosonState;

// Bichromatic spin-dependent-force parameters. The conditional
// displacement amplitude is alpha = -i eta_a omega0 duration e^{i phi_minus}/2.
struct CatParams {
  double eta_a = 0;     // Lamb-Dicke parameter of the drive transition
  double omega0 = 0;    // carrier Rabi frequency, rad/s
  double duration = 0;  // pulse duration, s
  double phi_minus = 0; // phase of the wavepacket axis, [0, 2pi)
  double phi_plus = 0;  // 0 generates, pi reverses

  static CatParams from_alpha(double alpha_mag, double phi_minus = 0.0);

  double alpha_mag() const { return 0.5 * eta_a * omega0 * duration; }
  Complex alpha() const;

  CatParams with_phi_minus(double phi) const;
};

// One displacement event. `phase` is the argument of the displacement in
// the oscillator rotating frame; an event at time t after the sequence
// start carries phase -omega_z t.
struct RecoilEvent {
  double eta = 0;    // displacement magnitude, >= 0
  double phase = 0;  // rad
  double t_event = 0;  // s, informational

  static RecoilEvent at_time(double eta, double t, double omega_z);
  Complex amplitude() const;  // i eta e^{i phase}
};

// Contrast ceiling and its decay with sequence duration.
struct DecoherenceModel {
  double s_max = 1.0;  // in [0, 1]
  double tau_d = 1.0;  // s, > 0

  DecoherenceModel(double s_max_in, double tau_d_in);
  double factor(double t) const;  // s_max * exp(-t / tau_d)
};

// Exact conditional-displacement evolution (phi_plus = 0).
SpinBosonState generate_cat(const SpinBosonState& state, const CatParams& p);

// Same interaction with phi_plus advanced by pi: exact inverse of
// generate_cat for equal parameters.
SpinBosonState reverse_cat(const SpinBosonState& state, const CatParams& p);

// n_kick displacements D(i eta_k), consecutive kicks separated by
// `spacing` of free evolution. In the rotating frame kick j carries phase
// -omega_z * j * spacing; a full-period spacing makes them add up to
// D(i n_kick eta_k), a half-period spacing cancels them pairwise.
SpinBosonState kick_train(const SpinBosonState& state, int n_kick,
                          double eta_k, double spacing, double omega_z);

std::vector<RecoilEvent> make_kick_train(int n_kick, double eta_k,
                                         double spacing, double omega_z);

// Noiseless peak-to-peak signal sin(4 eta |alpha|).
double analytic_signal(double eta, double alpha_mag);
// Contrast-limited version S_max(t) sin(4 eta |alpha|).
double analytic_signal(double eta, double alpha_mag,
                       const DecoherenceModel& model, double t = 0.0);
// Baseline of a perfect direct recoil measurement on the ground state.
double direct_signal(double eta);

// Full sequence: generation, recoils, reversal, analysis rotation,
// readout.
struct SequenceSpec {
  CatParams cat;
  std::vector<RecoilEvent> recoils;
  int fock_cutoff = 0;   // 0 = auto from amplitudes
  bool analyze_y = true; // false: plain z readout, no analysis pulse
};

// P(spin down) after one run of the sequence at the given phi_minus.
double run_sequence(const SequenceSpec& seq, double phi_minus);

struct PhaseScanResult {
  std::vector<double> phi;         // scan grid
  std::vector<double> population;  // P(down) per point
  double peak_to_peak = 0;         // extracted signal S
  double fit_offset = 0;
  double fit_residual_rms = 0;
  std::vector<int> harmonics;      // odd harmonics used in the fit
};

// Runs the exact sequence on an equally spaced phi_minus grid over one
// period and extracts the peak-to-peak contrast from an odd-harmonic
// least-squares fit of P(down). The fundamental alone cannot represent
// the response P = B + sin(K sin(phi - phi0))/2 once K approaches 1, so
// harmonics 3, 5, ... are included as the grid permits. Throws FitError
// if the fit residual exceeds residual_tol.
PhaseScanResult phase_scan(const SequenceSpec& seq, int n_points = 16,
                           double residual_tol = 1e-3);

}  // namespace catspec::catseq
