#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "catspec/catseq.hpp"
#include "catspec/crystal.hpp"
#include "catspec/molecule.hpp"

// End-to-end composition: pulse-train excitation converted to recoil
// signals and back to effective single-photon absorption probabilities,
// plus the three scans (kick calibration, pulse number, spectrum).
namespace catspec::experiment {

// One scan point in the fixed output schema. `extra` holds scan-specific
// trailing columns.
struct ScanPoint {
  double x = 0;
  double signal = 0;       // S
  double p_abs_eff = 0;    // S / S(eta_m), clamped at 0
  double stderr_mean = 0;
  double eta_m = 0;
  double alpha_mag = 0;
  double s_max_t = 0;
  std::vector<double> extra;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::vector<std::string> extra_columns;
  std::map<std::string, std::string> metadata;
};

// Effective absorption probability p = S / S_ref, clamped at zero.
// DomainError if S_ref is zero.
double absorption_probability(double signal, double signal_reference);

// Reference signal S(eta_m) at train duration t.
double reference_signal(double eta_m, double alpha_mag,
                        const catseq::DecoherenceModel& model, double t);

struct KickScanInputs {
  std::vector<int> n_kick;
  double eta_k = 0;
  catseq::CatParams cat;
  catseq::DecoherenceModel decoherence{1.0, 1.0};
  double eta_m = 0;        // reference for the p_abs_eff column
  int fock_cutoff = 0;     // 0 = auto
  int phi_points = 32;     // dense-oracle scan resolution
  bool dense_oracle = true;
};

// Per kick count: model signal S_max sin(4 n eta_k |alpha|), the exact
// Fock-space scan contrast, and the direct-detection baseline 2 eta.
// Extra columns: s_model, s_dense, s_direct.
ScanResult kick_calibration_scan(const KickScanInputs& in);

struct PulseScanInputs {
  std::vector<int> n_pulse;
  molecule::PulseTrainSpec train;
  molecule::MolecularTransition transition{1.0, 1.0};
  molecule::TrialOptions trial;
  catseq::CatParams cat;
  catseq::DecoherenceModel decoherence{1.0, 1.0};
  double eta_m = 0;
  double omega_z = 0;  // when > 0, a sync check is recorded in metadata
  int n_trials = 1000;
  std::uint64_t seed = 0;
  int threads = 0;
};

// Monte-Carlo excitation per pulse count mapped to the predicted signal
// S_pred = p_exc * S(eta_m, t) with t = n_pulse / f_rep. Extra column:
// p_exc.
ScanResult pulse_number_scan(const PulseScanInputs& in);

// Converts externally measured (x, S, sigma_S) rows into effective
// absorption probabilities with S(eta_m) evaluated at t = x / f_rep.
ScanResult convert_measured(const std::vector<std::array<double, 3>>& rows,
                            const catseq::CatParams& cat,
                            const catseq::DecoherenceModel& decoherence,
                            double eta_m, double f_rep);

struct SpectrumPoint {
  double nu_cm1 = 0;
  double fwhm_cm1 = 0;
};

struct SpectrumScanInputs {
  std::vector<SpectrumPoint> points;
  molecule::PulseTrainSpec train;  // center/linewidth overridden per point
  molecule::MolecularTransition transition{1.0, 1.0};
  molecule::TrialOptions trial;
  catseq::CatParams cat;
  catseq::DecoherenceModel decoherence{1.0, 1.0};
  // Geometry for the per-point recoil: eta_m is re-evaluated at each
  // probe wavenumber.
  crystal::IonCrystal ions;
  double cos_chi = 1.0;
  int n_trials = 1000;
  std::uint64_t seed = 0;
  int threads = 0;
};

// Absorption spectrum: per frequency point, the transform-limited pulse
// duration follows from the point's linewidth. Metadata records the
// argmax frequency. Extra column: p_exc.
ScanResult spectrum_scan(const SpectrumScanInputs& in);

// Binomial counting statistics layered over an exact probability:
// fraction of n_shots successes. DomainError outside [0, 1].
double shot_sampler(double probability, int n_shots, std::uint64_t seed);

}  // namespace catspec::experiment
