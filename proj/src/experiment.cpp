#include "catspec/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "catspec/constants.hpp"
#include "catspec/csv.hpp"

namespace catspec::experiment {

double absorption_probability(double signal, double signal_reference) {
  if (signal_reference == 0.0) {
    throw DomainError("reference signal is zero");
  }
  return std::max(0.0, signal / signal_reference);
}

double reference_signal(double eta_m, double alpha_mag,
                        const catseq::DecoherenceModel& model, double t) {
  return catseq::analytic_signal(eta_m, alpha_mag, model, t);
}

ScanResult kick_calibration_scan(const KickScanInputs& in) {
  if (in.eta_k < 0) throw DomainError("kick magnitude must be >= 0");
  const double alpha_mag = in.cat.alpha_mag();
  const double s_ref =
      in.eta_m > 0
          ? catseq::analytic_signal(in.eta_m, alpha_mag, in.decoherence, 0.0)
          : 0.0;

  ScanResult result;
  result.extra_columns = {"s_model", "s_dense", "s_direct"};
  result.metadata["scan"] = "kick_calibration";
  result.metadata["eta_k"] = csv::format_double(in.eta_k);

  for (int n : in.n_kick) {
    if (n < 0) throw DomainError("kick count must be >= 0");
    const double eta = n * in.eta_k;
    const double s_model =
        catseq::analytic_signal(eta, alpha_mag, in.decoherence, 0.0);

    double s_dense = 0.0;
    if (in.dense_oracle) {
      catseq::SequenceSpec seq;
      seq.cat = in.cat;
      seq.recoils = catseq::make_kick_train(n, in.eta_k, 0.0, 0.0);
      seq.fock_cutoff = in.fock_cutoff;
      // The exact scan knows nothing about the contrast ceiling; scale it
      // the same way the model is scaled.
      s_dense = in.decoherence.factor(0.0) *
                catseq::phase_scan(seq, in.phi_points).peak_to_peak;
    }

    ScanPoint p;
    p.x = n;
    p.signal = s_model;
    p.p_abs_eff = s_ref > 0 ? absorption_probability(s_model, s_ref) : 0.0;
    p.stderr_mean = 0.0;
    p.eta_m = in.eta_m;
    p.alpha_mag = alpha_mag;
    p.s_max_t = in.decoherence.factor(0.0);
    p.extra = {s_model, s_dense, catseq::direct_signal(eta)};
    result.points.push_back(p);
  }
  return result;
}

ScanResult pulse_number_scan(const PulseScanInputs& in) {
  ScanResult result;
  result.extra_columns = {"p_exc"};
  result.metadata["scan"] = "pulse_number";

  if (in.n_pulse.empty()) return result;
  const int n_max = *std::max_element(in.n_pulse.begin(), in.n_pulse.end());
  if (*std::min_element(in.n_pulse.begin(), in.n_pulse.end()) < 0) {
    throw DomainError("pulse counts must be >= 0");
  }

  if (in.omega_z > 0) {
    const auto sync = crystal::sync_check(in.omega_z, in.train.f_rep);
    result.metadata["sync_ratio"] = csv::format_double(sync.ratio);
    if (!sync.integer_sync) {
      result.metadata["warning"] =
          "trap frequency is not an integer multiple of the repetition rate";
    }
  }

  molecule::PulseTrainSpec train = in.train;
  train.n_pulse = n_max;
  std::vector<molecule::EnsembleResult> per_pulse;
  if (n_max > 0) {
    per_pulse = molecule::ensemble_per_pulse(train, in.transition, in.n_trials,
                                             in.seed, in.trial, in.threads);
  }

  const double alpha_mag = in.cat.alpha_mag();
  for (int n : in.n_pulse) {
    const double t = n / in.train.f_rep;
    const double s_ref =
        reference_signal(in.eta_m, alpha_mag, in.decoherence, t);
    molecule::EnsembleResult exc;
    if (n > 0) exc = per_pulse[n - 1];

    ScanPoint p;
    p.x = n;
    p.signal = exc.mean * s_ref;
    p.p_abs_eff = s_ref != 0.0 ? absorption_probability(p.signal, s_ref) : 0.0;
    p.stderr_mean = exc.stderr_mean;
    p.eta_m = in.eta_m;
    p.alpha_mag = alpha_mag;
    p.s_max_t = in.decoherence.factor(t);
    p.extra = {exc.mean};
    result.points.push_back(p);
  }
  return result;
}

ScanResult convert_measured(const std::vector<std::array<double, 3>>& rows,
                            const catseq::CatParams& cat,
                            const catseq::DecoherenceModel& decoherence,
                            double eta_m, double f_rep) {
  if (f_rep <= 0) throw DomainError("repetition rate must be > 0");
  ScanResult result;
  result.extra_columns = {"s_measured"};
  result.metadata["scan"] = "measured_conversion";
  const double alpha_mag = cat.alpha_mag();
  for (const auto& [x, s, sigma_s] : rows) {
    const double t = x / f_rep;
    const double s_ref = reference_signal(eta_m, alpha_mag, decoherence, t);
    ScanPoint p;
    p.x = x;
    p.signal = s;
    p.p_abs_eff = absorption_probability(s, s_ref);
    p.stderr_mean = std::abs(sigma_s / s_ref);
    p.eta_m = eta_m;
    p.alpha_mag = alpha_mag;
    p.s_max_t = decoherence.factor(t);
    p.extra = {s};
    result.points.push_back(p);
  }
  return result;
}

ScanResult spectrum_scan(const SpectrumScanInputs& in) {
  ScanResult result;
  result.extra_columns = {"p_exc"};
  result.metadata["scan"] = "spectrum";

  const double alpha_mag = in.cat.alpha_mag();
  const double t =
      in.train.n_pulse > 0 ? in.train.n_pulse / in.train.f_rep : 0.0;

  double best_x = 0.0, best_p = -1.0;
  for (std::size_t i = 0; i < in.points.size(); ++i) {
    const auto& pt = in.points[i];
    molecule::PulseTrainSpec train = in.train;
    train.nu_center_cm1 = pt.nu_cm1;
    train.fwhm_cm1 = pt.fwhm_cm1;
    train.fwhm_s.reset();

    const auto exc = molecule::ensemble_absorption(
        train, in.transition, in.n_trials,
        rng::derive_seed(in.seed, i), in.trial, in.threads);

    const crystal::LaserGeometry geometry{
        units::photon_wavevector(pt.nu_cm1), in.cos_chi};
    const double eta_m =
        crystal::lamb_dicke(in.ions, geometry, crystal::IonKind::molecule);
    const double s_ref = reference_signal(eta_m, alpha_mag, in.decoherence, t);

    ScanPoint p;
    p.x = pt.nu_cm1;
    p.signal = exc.mean * s_ref;
    p.p_abs_eff = absorption_probability(p.signal, s_ref);
    p.stderr_mean = exc.stderr_mean;
    p.eta_m = eta_m;
    p.alpha_mag = alpha_mag;
    p.s_max_t = in.decoherence.factor(t);
    p.extra = {exc.mean};
    result.points.push_back(p);

    if (p.p_abs_eff > best_p) {
      best_p = p.p_abs_eff;
      best_x = p.x;
    }
  }
  result.metadata["peak_cm1"] = csv::format_double(best_x);
  return result;
}

double shot_sampler(double probability, int n_shots, std::uint64_t seed) {
  if (probability < 0.0 || probability > 1.0) {
    throw DomainError("probability outside [0, 1]");
  }
  if (n_shots < 1) throw DomainError("n_shots must be >= 1");
  rng::SplitRng gen(seed);
  int hits = 0;
  for (int k = 0; k < n_shots; ++k) {
    if (gen.uniform() < probability) ++hits;
  }
  return static_cast<double>(hits) / n_shots;
}

}  // namespace catspec::experiment
