#include "catspec/runs.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "catspec/constants.hpp"
#include "catspec/csv.hpp"
#include "catspec/version.hpp"
#include "catspec/vibsolver.hpp"

namespace catspec::runs {

namespace {

using constants::pi;

std::string format(double v) { return csv::format_double(v); }

csv::Table scan_table(const experiment::ScanResult& scan) {
  csv::Table table;
  table.columns = {"x",     "S",         "p_abs_eff", "stderr",
                   "eta_m", "alpha_mag", "s_max_t"};
  for (const auto& col : scan.extra_columns) table.columns.push_back(col);
  for (const auto& p : scan.points) {
    std::vector<double> row = {p.x,           p.signal, p.p_abs_eff,
                               p.stderr_mean, p.eta_m,  p.alpha_mag,
                               p.s_max_t};
    row.insert(row.end(), p.extra.begin(), p.extra.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

experiment::PulseScanInputs pulse_inputs(const config::Resolved& r) {
  experiment::PulseScanInputs in;
  in.n_pulse = r.pulse_list;
  in.train = r.train;
  in.transition = r.transition;
  in.trial = r.trial;
  in.cat = r.cat;
  in.decoherence = r.decoherence;
  in.eta_m = r.eta_m;
  in.omega_z = r.ions.omega_in_phase;
  in.n_trials = r.n_trials;
  in.seed = r.seed;
  in.threads = r.threads;
  return in;
}

}  // namespace

std::string scan_to_csv(const experiment::ScanResult& scan,
                        const config::Resolved& r,
                        const std::string& subcommand) {
  csv::Table table = scan_table(scan);
  table.metadata = scan.metadata;
  table.metadata["app"] = std::string("catspec ") + kVersion;
  table.metadata["subcommand"] = subcommand;
  table.metadata["config_hash"] = r.config_hash;
  table.metadata["seed"] = std::to_string(r.seed);
  return csv::write(table);
}

std::string manifest_json(const config::Resolved& r,
                          const std::string& subcommand,
                          const std::vector<std::string>& file_names) {
  nlohmann::ordered_json manifest;
  manifest["app"] = "catspec";
  manifest["version"] = kVersion;
  manifest["subcommand"] = subcommand;
  manifest["config_hash"] = r.config_hash;
  manifest["master_seed"] = r.seed;
  nlohmann::ordered_json cfg;
  for (const auto& [key, value] : r.raw.entries()) {
    const auto dot = key.find('.');
    cfg[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  manifest["config"] = cfg;
  manifest["derived"] = {
      {"omega_z_khz", r.ions.omega_in_phase / (2.0 * pi * 1e3)},
      {"omega_op_khz", r.ions.omega_out_phase / (2.0 * pi * 1e3)},
      {"eta_a", r.eta_a},
      {"eta_m", r.eta_m},
      {"alpha_mag", r.cat.alpha_mag()},
      {"sync_ratio", r.sync.ratio},
  };
  manifest["outputs"] = file_names;
  return manifest.dump(2) + "\n";
}

namespace {

RunOutput with_manifest(const config::Resolved& r,
                        const std::string& subcommand, RunOutput out) {
  std::vector<std::string> names;
  names.reserve(out.files.size());
  for (const auto& f : out.files) names.push_back(f.name);
  out.files.push_back(
      {subcommand + ".manifest.json", manifest_json(r, subcommand, names)});
  return out;
}

}  // namespace

RunOutput run_modes(const config::Resolved& r) {
  std::ostringstream text;
  const double omega_z_khz = r.ions.omega_in_phase / (2.0 * pi * 1e3);
  const double omega_op_khz = r.ions.omega_out_phase / (2.0 * pi * 1e3);
  text << "two-ion axial modes\n"
       << "  m_atom_u        = " << format(r.ions.m_atom /
                                           constants::atomic_mass_unit)
       << "\n"
       << "  m_mol_u         = " << format(r.ions.m_mol /
                                           constants::atomic_mass_unit)
       << "\n"
       << "  omega_single_khz= "
       << format(r.ions.omega_single / (2.0 * pi * 1e3)) << "\n"
       << "  omega_z_khz     = " << format(omega_z_khz) << "\n"
       << "  omega_op_khz    = " << format(omega_op_khz) << "\n"
       << "  e_z_atom        = " << format(r.ions.mode_in_phase(0)) << "\n"
       << "  e_z_mol         = " << format(r.ions.mode_in_phase(1)) << "\n"
       << "  spacing_um      = " << format(r.ions.spacing * 1e6) << "\n"
       << "  eta_a           = " << format(r.eta_a) << "\n"
       << "  eta_m           = " << format(r.eta_m) << "\n";

  experiment::ScanResult scan;
  scan.metadata["scan"] = "modes";
  scan.extra_columns = {"omega_op_khz", "e_z_atom", "e_z_mol", "eta_a"};
  experiment::ScanPoint p;
  p.x = omega_z_khz;
  p.signal = 0.0;
  p.p_abs_eff = 0.0;
  p.stderr_mean = 0.0;
  p.eta_m = r.eta_m;
  p.alpha_mag = r.cat.alpha_mag();
  p.s_max_t = r.decoherence.factor(0.0);
  p.extra = {omega_op_khz, r.ions.mode_in_phase(0), r.ions.mode_in_phase(1),
             r.eta_a};
  scan.points.push_back(p);

  RunOutput out;
  out.files.push_back({"modes.csv", scan_to_csv(scan, r, "modes")});
  out.text = text.str();
  return with_manifest(r, "modes", std::move(out));
}

RunOutput run_signal(const config::Resolved& r) {
  experiment::ScanResult scan;
  scan.metadata["scan"] = "signal";
  scan.extra_columns = {"s_noiseless", "s_direct"};
  const double alpha_mag = r.cat.alpha_mag();
  const double eta = r.eta;
  const double s = catseq::analytic_signal(eta, alpha_mag, r.decoherence, 0.0);

  experiment::ScanPoint p;
  p.x = eta;
  p.signal = s;
  const double s_ref =
      catseq::analytic_signal(r.eta_m, alpha_mag, r.decoherence, 0.0);
  p.p_abs_eff = s_ref != 0.0 ? experiment::absorption_probability(s, s_ref) : 0.0;
  p.stderr_mean = 0.0;
  p.eta_m = r.eta_m;
  p.alpha_mag = alpha_mag;
  p.s_max_t = r.decoherence.factor(0.0);
  p.extra = {catseq::analytic_signal(eta, alpha_mag),
             catseq::direct_signal(eta)};
  scan.points.push_back(p);

  RunOutput out;
  out.files.push_back({"signal.csv", scan_to_csv(scan, r, "signal")});
  std::ostringstream text;
  text << "S(eta=" << format(eta) << ", |alpha|=" << format(alpha_mag)
       << ") = " << format(s) << "  (direct baseline "
       << format(catseq::direct_signal(eta)) << ")\n";
  out.text = text.str();
  return with_manifest(r, "signal", std::move(out));
}

RunOutput run_kickscan(const config::Resolved& r) {
  experiment::KickScanInputs in;
  in.n_kick = r.kick_list;
  in.eta_k = r.eta;
  in.cat = r.cat;
  in.decoherence = r.decoherence;
  in.eta_m = r.eta_m;
  in.fock_cutoff = r.fock_cutoff;
  in.phi_points = std::max(32, r.phi_points);
  const auto scan = experiment::kick_calibration_scan(in);

  RunOutput out;
  out.files.push_back({"kickscan.csv", scan_to_csv(scan, r, "kickscan")});
  std::ostringstream text;
  text << "kick calibration: " << scan.points.size()
       << " points, eta_k = " << format(in.eta_k) << "\n";
  out.text = text.str();
  return with_manifest(r, "kickscan", std::move(out));
}

RunOutput run_excite(const config::Resolved& r) {
  const auto exc = molecule::ensemble_absorption(
      r.train, r.transition, r.n_trials, rng::derive_seed(r.seed, 0), r.trial,
      r.threads);

  experiment::ScanResult scan;
  scan.metadata["scan"] = "excite";
  scan.extra_columns = {"p_exc"};
  const double t = r.train.n_pulse / r.train.f_rep;
  const double s_ref = experiment::reference_signal(
      r.eta_m, r.cat.alpha_mag(), r.decoherence, t);
  experiment::ScanPoint p;
  p.x = r.train.nu_center_cm1;
  p.signal = exc.mean * s_ref;
  p.p_abs_eff = experiment::absorption_probability(p.signal, s_ref);
  p.stderr_mean = exc.stderr_mean;
  p.eta_m = r.eta_m;
  p.alpha_mag = r.cat.alpha_mag();
  p.s_max_t = r.decoherence.factor(t);
  p.extra = {exc.mean};
  if (r.n_shots > 0) {
    scan.extra_columns.push_back("p_exc_sampled");
    p.extra.push_back(experiment::shot_sampler(
        std::clamp(exc.mean, 0.0, 1.0), r.n_shots,
        rng::derive_seed(r.seed, 1)));
  }
  scan.points.push_back(p);

  RunOutput out;
  out.files.push_back({"excite.csv", scan_to_csv(scan, r, "excite")});
  std::ostringstream text;
  text << "excitation probability after " << r.train.n_pulse << " pulses at "
       << format(r.train.nu_center_cm1) << " cm^-1: " << format(exc.mean)
       << " +/- " << format(exc.stderr_mean) << " (" << r.n_trials
       << " trials)\n";
  out.text = text.str();
  return with_manifest(r, "excite", std::move(out));
}

RunOutput run_pulsescan(const config::Resolved& r) {
  auto in = pulse_inputs(r);
  auto scan = experiment::pulse_number_scan(in);

  RunOutput out;
  out.files.push_back({"pulsescan.csv", scan_to_csv(scan, r, "pulsescan")});

  if (!r.measured_csv.empty()) {
    const csv::Table measured = csv::read_file(r.measured_csv);
    std::vector<std::array<double, 3>> rows;
    for (const auto& row : measured.rows) {
      if (row.size() < 3) {
        throw ConfigError(r.measured_csv + ": rows need x, S, sigma_S");
      }
      rows.push_back({row[0], row[1], row[2]});
    }
    const auto converted = experiment::convert_measured(
        rows, r.cat, r.decoherence, r.eta_m, r.train.f_rep);
    out.files.push_back(
        {"pulsescan_measured.csv", scan_to_csv(converted, r, "pulsescan")});
  }

  std::ostringstream text;
  text << "pulse-number scan: " << scan.points.size() << " points, "
       << r.n_trials << " trials each\n";
  out.text = text.str();
  return with_manifest(r, "pulsescan", std::move(out));
}

RunOutput run_spectrum(const config::Resolved& r) {
  experiment::SpectrumScanInputs in;
  for (double nu : r.spectrum_grid_cm1) {
    double fwhm;
    if (r.train.fwhm_cm1) {
      fwhm = *r.train.fwhm_cm1;
    } else {
      fwhm = units::duration_to_fwhm_cm1(r.train.fwhm_duration());
    }
    in.points.push_back({nu, fwhm});
  }
  in.train = r.train;
  in.transition = r.transition;
  in.trial = r.trial;
  in.cat = r.cat;
  in.decoherence = r.decoherence;
  in.ions = r.ions;
  in.cos_chi = r.cos_chi;
  in.n_trials = r.n_trials;
  in.seed = r.seed;
  in.threads = r.threads;
  const auto scan = experiment::spectrum_scan(in);

  RunOutput out;
  out.files.push_back({"spectrum.csv", scan_to_csv(scan, r, "spectrum")});
  std::ostringstream text;
  text << "spectrum: " << scan.points.size() << " points, peak near "
       << scan.metadata.at("peak_cm1") << " cm^-1\n";
  out.text = text.str();
  return with_manifest(r, "spectrum", std::move(out));
}

RunOutput run_dvr(const config::Resolved& r) {
  if (!r.raw.has("transition.potential_csv")) {
    throw ConfigError("dvr requires transition.potential_csv");
  }
  vibsolver::Curve1D potential =
      vibsolver::load_curve_csv(r.raw.get_string("transition.potential_csv"));
  if (r.raw.has("transition.dvr_resample_points")) {
    potential = vibsolver::resample(
        potential, r.raw.get_int("transition.dvr_resample_points"));
  }
  const int n_levels = r.raw.has("transition.dvr_levels")
                           ? r.raw.get_int("transition.dvr_levels")
                           : 8;
  const auto levels = vibsolver::dvr_solve(potential, n_levels);
  const auto shift = vibsolver::anharmonic_shift_report(levels);

  // Convergence estimate: re-solve on a twice-denser spline resample.
  const auto fine = vibsolver::dvr_solve(
      vibsolver::resample(potential,
                          2 * static_cast<int>(potential.grid.size()) - 1),
      2);
  const double fundamental_change =
      units::joule_to_cm1(fine.energies(1) - fine.energies(0)) -
      shift.fundamental_cm1;

  csv::Table level_table;
  level_table.metadata["app"] = std::string("catspec ") + kVersion;
  level_table.metadata["subcommand"] = "dvr";
  level_table.metadata["config_hash"] = r.config_hash;
  level_table.metadata["fundamental_cm1"] = format(shift.fundamental_cm1);
  level_table.metadata["harmonic_cm1"] = format(shift.harmonic_cm1);
  level_table.metadata["anharmonic_shift_cm1"] = format(shift.shift_cm1);
  level_table.metadata["grid_refinement_change_cm1"] =
      format(fundamental_change);
  level_table.columns = {"n", "energy_cm1"};
  for (int n = 0; n < levels.energies.size(); ++n) {
    level_table.rows.push_back(
        {static_cast<double>(n), units::joule_to_cm1(levels.energies(n))});
  }

  RunOutput out;
  out.files.push_back({"dvr_levels.csv", csv::write(level_table)});

  if (r.raw.has("transition.dipole_csv")) {
    const auto dipole =
        vibsolver::load_curve_csv(r.raw.get_string("transition.dipole_csv"));
    csv::Table transition_table;
    transition_table.metadata = level_table.metadata;
    transition_table.columns = {"i", "j", "nu_cm1", "mu_debye", "f"};
    for (int i = 0; i < levels.energies.size(); ++i) {
      for (int j = i + 1; j < levels.energies.size(); ++j) {
        const auto t = vibsolver::transition_strength(levels, dipole, i, j);
        transition_table.rows.push_back(
            {static_cast<double>(i), static_cast<double>(j), t.wavenumber_cm1,
             t.dipole / constants::debye, t.oscillator_strength});
      }
    }
    out.files.push_back({"dvr_transitions.csv", csv::write(transition_table)});
  }

  std::ostringstream text;
  text << "vibrational levels: " << levels.energies.size() << "\n"
       << "  fundamental_cm1 = " << format(shift.fundamental_cm1) << "\n"
       << "  harmonic_cm1    = " << format(shift.harmonic_cm1) << "\n"
       << "  shift_cm1       = " << format(shift.shift_cm1) << "\n"
       << "  refinement_change_cm1 = " << format(fundamental_change) << "\n";
  out.text = text.str();
  return with_manifest(r, "dvr", std::move(out));
}

RunOutput run_validate(const config::Resolved& r) {
  std::ostringstream text;
  text << "config ok (hash " << r.config_hash << ")\n"
       << "  omega_z_khz  = " << format(r.ions.omega_in_phase / (2.0 * pi * 1e3))
       << "\n"
       << "  omega_op_khz = "
       << format(r.ions.omega_out_phase / (2.0 * pi * 1e3)) << "\n"
       << "  sync_ratio   = " << format(r.sync.ratio)
       << (r.sync.integer_sync ? " (integer-synchronized)" : " (NOT integer)")
       << "\n"
       << "  phase_spread = " << format(r.sync.phase_spread) << "\n"
       << "  eta_a        = " << format(r.eta_a) << "\n"
       << "  eta_m        = " << format(r.eta_m) << "\n"
       << "  alpha_mag    = " << format(r.cat.alpha_mag()) << "\n"
       << "  s_max        = " << format(r.decoherence.s_max) << "\n"
       << "  tau_d_ms     = " << format(r.decoherence.tau_d * 1e3) << "\n"
       << "  nu0_cm1      = " << format(r.transition.nu0_cm1) << "\n"
       << "  f_eg         = " << format(r.transition.f_eg) << "\n"
       << "  mu_eg_debye  = "
       << format(r.transition.dipole() / constants::debye) << "\n"
       << "  peak_field_v_m = " << format(r.train.peak_field()) << "\n"
       << "  tau_fwhm_fs  = " << format(r.train.fwhm_duration() * 1e15)
       << "\n";
  RunOutput out;
  out.text = text.str();
  return out;
}

RunOutput dispatch(const std::string& subcommand, const config::Resolved& r) {
  if (subcommand == "modes") return run_modes(r);
  if (subcommand == "signal") return run_signal(r);
  if (subcommand == "kickscan") return run_kickscan(r);
  if (subcommand == "excite") return run_excite(r);
  if (subcommand == "pulsescan") return run_pulsescan(r);
  if (subcommand == "spectrum") return run_spectrum(r);
  if (subcommand == "dvr") return run_dvr(r);
  if (subcommand == "validate") return run_validate(r);
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

}  // namespace catspec::runs
