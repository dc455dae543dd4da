#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catspec/errors.hpp"
#include "catspec/rng.hpp"

// Two-level molecule driven by a train of Gaussian pulses with random
// optical phase and random molecular orientation. Pure-state dynamics;
// no spontaneous decay and no recoil back-action on the internal state.
namespace catspec::molecule {

using Complex = std::complex<double>;

// Vibrational transition characterized by its wavenumber and oscillator
// strength; the transition dipole follows from
// mu_eg = sqrt(f_eg * 3 hbar e^2 / (m_e omega0)).
struct MolecularTransition {
  double nu0_cm1 = 0;
  double f_eg = 0;

  MolecularTransition(double nu0_cm1_in, double f_eg_in);
  double omega0() const;  // rad/s
  double dipole() const;  // C m
};

// Pulse-train description. Exactly one of fwhm_cm1 / fwhm_s must be set
// when transform_limited; the other follows from the Gaussian
// time-bandwidth product. Durations are intensity FWHM.
struct PulseTrainSpec {
  double nu_center_cm1 = 0;
  std::optional<double> fwhm_cm1;
  std::optional<double> fwhm_s;
  double i_avg = 0;   // W/m^2, averaged over the train
  double f_rep = 0;   // Hz
  int n_pulse = 0;
  bool transform_limited = true;

  void validate() const;
  double fwhm_duration() const;             // s
  double tau_sigma() const;                 // fwhm / (2 sqrt(2 ln 2))
  double peak_field() const;                // V/m
  double detuning(const MolecularTransition& t) const;  // rad/s
};

struct TlsState {
  Complex c_g{1.0, 0.0};
  Complex c_e{0.0, 0.0};

  double norm_squared() const { return std::norm(c_g) + std::norm(c_e); }
  double p_excited() const { return std::norm(c_e); }
};

// Single-pulse parameters in the interaction picture.
struct PulseParams {
  double e0 = 0;         // peak field, V/m
  double tau_sigma = 0;  // s
  double detuning = 0;   // rad/s
  double phase = 0;      // optical phase
  double theta = 0;      // angle between molecular axis and polarization
};

struct IntegrationOptions {
  int n_steps = 2000;        // RK4 steps across the window
  double window_sigmas = 10; // integrate over +/- window_sigmas * tau_sigma
  bool verify = true;        // step-doubling check, tolerance 1e-8 on P_e
};

// Fixed-step RK4 integration of the pulse Hamiltonian
//   H = hbar Omega(t)/2 (|e><g| e^{i phi} + h.c.) + hbar Delta |g><g|,
//   Omega(t) = (2 mu E0 cos(theta) / hbar) exp(-t^2 / 4 tau_sigma^2).
// The step count is raised automatically so the detuning phase advances
// at most 0.02 rad per step. Throws IntegrationError if step doubling
// moves P_e by more than 1e-8, NormalizationError if the norm drifts by
// more than 1e-6.
TlsState propagate_pulse(const TlsState& state, const PulseParams& pulse,
                         const MolecularTransition& transition,
                         const IntegrationOptions& opts = {});

enum class OrientationMode { per_trial, per_pulse, fixed };

struct TrialOptions {
  OrientationMode orientation = OrientationMode::per_trial;
  double fixed_theta = 0;  // used by OrientationMode::fixed
  IntegrationOptions integration{.n_steps = 2000,
                                 .window_sigmas = 10,
                                 .verify = false};
  // P_e threshold defining the "first excitation" pulse index.
  double excitation_threshold = 0.5;
};

struct TrialRecord {
  std::vector<double> p_e_after_pulse;
  int first_excitation_pulse = -1;  // 0-based, -1 if never above threshold
  double theta = 0;                 // orientation of the trial (last drawn)

  double final_p_e() const {
    return p_e_after_pulse.empty() ? 0.0 : p_e_after_pulse.back();
  }
};

// One trajectory: draw the orientation, then for each pulse draw a fresh
// uniform optical phase and propagate. Identical seeds give identical
// records.
TrialRecord run_trial(const PulseTrainSpec& spec,
                      const MolecularTransition& transition,
                      std::uint64_t seed, const TrialOptions& opts = {});

struct EnsembleResult {
  double mean = 0;
  double stderr_mean = 0;
  int n_trials = 0;
};

// Mean excitation probability after the full train over independent
// seeded trials (trial k uses derive_seed(master_seed, k)). Results are
// independent of thread count.
EnsembleResult ensemble_absorption(const PulseTrainSpec& spec,
                                   const MolecularTransition& transition,
                                   int n_trials, std::uint64_t master_seed,
                                   const TrialOptions& opts = {},
                                   int threads = 0);

// Per-pulse ensemble means: element n is the mean P_e after pulse n+1,
// from the same trials as ensemble_absorption (its final element equals
// the ensemble_absorption result bit for bit).
std::vector<EnsembleResult> ensemble_per_pulse(
    const PulseTrainSpec& spec, const MolecularTransition& transition,
    int n_trials, std::uint64_t master_seed, const TrialOptions& opts = {},
    int threads = 0);

// Center (intensity-weighted mean) and FWHM linewidth of a measured
// source spectrum given as two columns (wavenumber cm^-1, relative
// intensity).
struct SourceSpectrum {
  double center_cm1 = 0;
  double fwhm_cm1 = 0;
};
SourceSpectrum spectrum_from_csv(const std::string& path);

}  // namespace catspec::molecule
