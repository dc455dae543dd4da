#include "catspec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "catspec/constants.hpp"
#include "catspec/csv.hpp"
#include "catspec/vibsolver.hpp"

namespace catspec::config {

namespace {

using constants::atomic_mass_unit;
using constants::pi;

// The complete key dictionary. Every configurable quantity in the
// program appears here once, with its unit in the name.
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "crystal.m_atom_u",
      "crystal.m_mol_u",
      "crystal.omega_single_khz",
      "crystal.omega_z_khz",
      "crystal.cos_chi",
      "crystal.atom_wavelength_nm",
      "crystal.d_omega_z_hz",
      "crystal.d_f_rep_hz",
      "crystal.max_wait_us",
      "cat.alpha_mag",
      "cat.eta_a",
      "cat.omega0_khz",
      "cat.duration_us",
      "decoherence.s_max",
      "decoherence.tau_d_ms",
      "decoherence.s_max_table_csv",
      "transition.nu0_cm1",
      "transition.f_eg",
      "transition.potential_csv",
      "transition.dipole_csv",
      "transition.dvr_levels",
      "transition.dvr_resample_points",
      "laser.nu_center_cm1",
      "laser.fwhm_cm1",
      "laser.fwhm_fs",
      "laser.i_avg_w_cm2",
      "laser.f_rep_khz",
      "laser.n_pulse",
      "laser.spectrum_csv",
      "molecule.orientation",
      "molecule.fixed_theta_deg",
      "molecule.rk4_steps",
      "molecule.window_sigmas",
      "run.seed",
      "run.n_trials",
      "run.n_shots",
      "run.threads",
      "run.fock_cutoff",
      "run.phi_points",
      "run.eta",
      "run.kick_list",
      "run.pulse_list",
      "run.spectrum_scan",
      "run.out_dir",
      "run.measured_csv",
  };
  return keys;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check_key(const std::string& dotted, const std::string& where) {
  if (!known_keys().count(dotted)) {
    throw ConfigError(where + ": unknown key '" + dotted + "'");
  }
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.set("crystal.m_atom_u", "40");
  c.set("crystal.m_mol_u", "57");
  c.set("crystal.omega_z_khz", "400");
  c.set("crystal.cos_chi", "1.0");
  c.set("crystal.atom_wavelength_nm", "729");
  c.set("crystal.d_omega_z_hz", "0");
  c.set("crystal.d_f_rep_hz", "0");
  c.set("crystal.max_wait_us", "50");
  c.set("cat.alpha_mag", "6.5");
  c.set("decoherence.s_max", "1.0");
  c.set("decoherence.tau_d_ms", "1e9");
  c.set("transition.nu0_cm1", "3783");
  c.set("transition.f_eg", "3.7e-5");
  c.set("laser.nu_center_cm1", "3703.3");
  c.set("laser.fwhm_cm1", "126.7");
  c.set("laser.i_avg_w_cm2", "1.1e4");
  c.set("laser.f_rep_khz", "100");
  c.set("laser.n_pulse", "34");
  c.set("molecule.orientation", "per_trial");
  c.set("molecule.fixed_theta_deg", "0");
  c.set("molecule.rk4_steps", "2000");
  c.set("molecule.window_sigmas", "10");
  c.set("run.seed", "20260809");
  c.set("run.n_trials", "2000");
  c.set("run.n_shots", "0");
  c.set("run.threads", "0");
  c.set("run.fock_cutoff", "200");
  c.set("run.phi_points", "16");
  c.set("run.eta", "0.0193");
  c.set("run.kick_list", "0,1,2,3,4,5,6,8");
  c.set("run.pulse_list", "1,2,4,8,12,16,20,24,28,34");
  c.set("run.spectrum_scan", "3600:25:4000");
  c.set("run.out_dir", ".");
  return c;
}

RunConfig RunConfig::paper_defaults() {
  // The reference parameter set: Ca+/CaOH+ masses, 400 kHz in-phase mode
  // locked to four times the 100 kHz repetition rate, cat amplitude 6.5
  // with contrast ceiling 0.52 decaying over 0.88 ms, the O-H stretch
  // constants, and the mid-IR pulse train used for the measured scans.
  RunConfig c = defaults();
  c.set("decoherence.s_max", "0.52");
  c.set("decoherence.tau_d_ms", "0.88");
  c.set("crystal.d_omega_z_hz", "50");
  c.set("crystal.d_f_rep_hz", "10");
  return c;
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    // strip trailing comment
    auto hash_pos = value.find(" #");
    if (hash_pos != std::string::npos) value = trim(value.substr(0, hash_pos));
    if (key.empty() || value.empty()) {
      throw ConfigError(where + ": empty key or value");
    }
    if (section.empty()) {
      throw ConfigError(where + ": key outside any [section]");
    }
    const std::string dotted = section + "." + key;
    check_key(dotted, where);
    values_[dotted] = value;
  }
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  merge_text(buf.str(), path);
}

void RunConfig::set_override(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  }
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.find('.') == std::string::npos) {
    // Bare key: resolve against the dictionary if unique.
    std::vector<std::string> matches;
    for (const auto& k : known_keys()) {
      if (k.substr(k.find('.') + 1) == key) matches.push_back(k);
    }
    if (matches.empty()) {
      throw ConfigError("--set: unknown key '" + key + "'");
    }
    if (matches.size() > 1) {
      std::string msg = "--set: ambiguous key '" + key + "' (";
      for (const auto& m : matches) msg += m + " ";
      throw ConfigError(msg + ")");
    }
    key = matches.front();
  }
  check_key(key, "--set");
  values_[key] = value;
}

const std::string& RunConfig::get(const std::string& dotted_key) const {
  auto it = values_.find(dotted_key);
  if (it == values_.end()) {
    throw ConfigError("missing required key '" + dotted_key + "'");
  }
  return it->second;
}

bool RunConfig::has(const std::string& dotted_key) const {
  return values_.count(dotted_key) != 0;
}

double RunConfig::get_double(const std::string& dotted_key) const {
  const std::string& v = get(dotted_key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (!end || *end != '\0') {
    throw ConfigError("key '" + dotted_key + "': '" + v + "' is not a number");
  }
  return x;
}

int RunConfig::get_int(const std::string& dotted_key) const {
  const double x = get_double(dotted_key);
  if (x != std::floor(x)) {
    throw ConfigError("key '" + dotted_key + "' must be an integer");
  }
  return static_cast<int>(x);
}

std::uint64_t RunConfig::get_u64(const std::string& dotted_key) const {
  const std::string& v = get(dotted_key);
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("key '" + dotted_key + "' must be a non-negative integer");
  }
}

std::string RunConfig::get_string(const std::string& dotted_key) const {
  return get(dotted_key);
}

std::vector<double> RunConfig::get_list(const std::string& dotted_key) const {
  try {
    return parse_grid(get(dotted_key));
  } catch (const ConfigError& e) {
    throw ConfigError("key '" + dotted_key + "': " + e.what());
  }
}

std::vector<int> RunConfig::get_int_list(const std::string& dotted_key) const {
  std::vector<int> out;
  for (double v : get_list(dotted_key)) {
    if (v != std::floor(v)) {
      throw ConfigError("key '" + dotted_key + "' must list integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
  check_key(dotted_key, "set");
  values_[dotted_key] = value;
}

void RunConfig::unset(const std::string& dotted_key) {
  values_.erase(dotted_key);
}

std::string RunConfig::serialize() const {
  std::string out, section;
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

std::string RunConfig::hash() const {
  const std::string text = serialize();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto to_double = [&](const std::string& s) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (!end || *end != '\0' || s.empty()) {
      throw ConfigError("'" + s + "' is not a number");
    }
    return x;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw ConfigError("range needs start:step:stop");
    const double start = to_double(trim(parts[0]));
    const double step = to_double(trim(parts[1]));
    const double stop = to_double(trim(parts[2]));
    if (step <= 0 || stop < start) throw ConfigError("bad range bounds");
    for (double x = start; x <= stop + 0.5 * step; x += step) {
      out.push_back(std::min(x, stop));
    }
    return out;
  }
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      const std::string t = trim(cur);
      if (!t.empty()) out.push_back(to_double(t));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

namespace {

double resolve_s_max(const RunConfig& c, double alpha_mag) {
  if (!c.has("decoherence.s_max_table_csv")) {
    return c.get_double("decoherence.s_max");
  }
  // Tabulated contrast ceiling versus cat amplitude, linearly
  // interpolated, clamped at the table ends.
  const csv::Table table =
      csv::read_file(c.get_string("decoherence.s_max_table_csv"));
  if (table.rows.size() < 2) {
    throw ConfigError("s_max table needs >= 2 rows (alpha, s_max)");
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : table.rows) {
    if (row.size() < 2) throw ConfigError("s_max table rows need two columns");
    pts.emplace_back(row[0], row[1]);
  }
  std::sort(pts.begin(), pts.end());
  if (alpha_mag <= pts.front().first) return pts.front().second;
  if (alpha_mag >= pts.back().first) return pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (alpha_mag <= pts[i].first) {
      const double f = (alpha_mag - pts[i - 1].first) /
                       (pts[i].first - pts[i - 1].first);
      return pts[i - 1].second + f * (pts[i].second - pts[i - 1].second);
    }
  }
  return pts.back().second;
}

}  // namespace

Resolved resolve(const RunConfig& c) {
  Resolved r;
  r.raw = c;
  r.config_hash = c.hash();

  const double m_atom = c.get_double("crystal.m_atom_u") * atomic_mass_unit;
  const double m_mol = c.get_double("crystal.m_mol_u") * atomic_mass_unit;
  if (m_atom <= 0 || m_mol <= 0) {
    throw ConfigError("crystal masses must be > 0");
  }

  double omega_single;
  if (c.has("crystal.omega_single_khz") && c.has("crystal.omega_z_khz")) {
    throw ConfigError(
        "give exactly one of crystal.omega_single_khz / crystal.omega_z_khz");
  } else if (c.has("crystal.omega_single_khz")) {
    omega_single = 2.0 * pi * 1e3 * c.get_double("crystal.omega_single_khz");
  } else {
    const double omega_z = 2.0 * pi * 1e3 * c.get_double("crystal.omega_z_khz");
    if (omega_z <= 0) throw ConfigError("crystal.omega_z_khz must be > 0");
    omega_single = crystal::omega_single_for_in_phase(m_atom, m_mol, omega_z);
  }
  if (omega_single <= 0) throw ConfigError("trap frequency must be > 0");
  r.ions = crystal::solve_modes(m_atom, m_mol, omega_single);

  r.cos_chi = c.get_double("crystal.cos_chi");
  if (std::abs(r.cos_chi) > 1.0) {
    throw ConfigError("crystal.cos_chi must be within [-1, 1]");
  }

  // Transition constants, possibly via the vibrational eigensolver.
  double nu0 = c.get_double("transition.nu0_cm1");
  double f_eg = c.get_double("transition.f_eg");
  if (c.has("transition.potential_csv")) {
    vibsolver::Curve1D potential =
        vibsolver::load_curve_csv(c.get_string("transition.potential_csv"));
    if (c.has("transition.dvr_resample_points")) {
      potential = vibsolver::resample(
          potential, c.get_int("transition.dvr_resample_points"));
    }
    const int n_levels =
        c.has("transition.dvr_levels") ? c.get_int("transition.dvr_levels") : 4;
    const auto levels = vibsolver::dvr_solve(potential, n_levels);
    if (!c.has("transition.dipole_csv")) {
      throw ConfigError(
          "transition.dipole_csv required with transition.potential_csv");
    }
    const auto dipole =
        vibsolver::load_curve_csv(c.get_string("transition.dipole_csv"));
    const auto t = vibsolver::transition_strength(levels, dipole, 0, 1);
    nu0 = t.wavenumber_cm1;
    f_eg = t.oscillator_strength;
  }
  r.transition = molecule::MolecularTransition(nu0, f_eg);

  // Pulse train.
  r.train.nu_center_cm1 = c.get_double("laser.nu_center_cm1");
  if (c.has("laser.spectrum_csv")) {
    const auto src =
        molecule::spectrum_from_csv(c.get_string("laser.spectrum_csv"));
    r.train.nu_center_cm1 = src.center_cm1;
    r.train.fwhm_cm1 = src.fwhm_cm1;
  } else if (c.has("laser.fwhm_cm1") && c.has("laser.fwhm_fs")) {
    throw ConfigError("give exactly one of laser.fwhm_cm1 / laser.fwhm_fs");
  } else if (c.has("laser.fwhm_fs")) {
    r.train.fwhm_s = c.get_double("laser.fwhm_fs") * 1e-15;
  } else {
    r.train.fwhm_cm1 = c.get_double("laser.fwhm_cm1");
  }
  r.train.i_avg = c.get_double("laser.i_avg_w_cm2") * 1e4;  // W/cm^2 -> W/m^2
  r.train.f_rep = c.get_double("laser.f_rep_khz") * 1e3;
  r.train.n_pulse = c.get_int("laser.n_pulse");
  r.train.validate();

  // Lamb-Dicke parameters: drive transition on the atom, recoil at the
  // laser center on the molecule.
  const double k_atom =
      2.0 * pi / (c.get_double("crystal.atom_wavelength_nm") * 1e-9);
  r.eta_a = crystal::lamb_dicke(r.ions, {k_atom, r.cos_chi},
                                crystal::IonKind::atom);
  r.eta_m = crystal::lamb_dicke(
      r.ions, {units::photon_wavevector(r.train.nu_center_cm1), r.cos_chi},
      crystal::IonKind::molecule);

  // Cat parameters; alpha_mag directly or the drive triple.
  const bool has_triple = c.has("cat.omega0_khz") || c.has("cat.duration_us");
  if (has_triple) {
    if (!(c.has("cat.omega0_khz") && c.has("cat.duration_us"))) {
      throw ConfigError("cat drive needs both omega0_khz and duration_us");
    }
    r.cat.eta_a = c.has("cat.eta_a") ? c.get_double("cat.eta_a") : r.eta_a;
    r.cat.omega0 = 2.0 * pi * 1e3 * c.get_double("cat.omega0_khz");
    r.cat.duration = 1e-6 * c.get_double("cat.duration_us");
  } else {
    r.cat = catseq::CatParams::from_alpha(c.get_double("cat.alpha_mag"));
  }
  if (r.cat.alpha_mag() < 0) throw ConfigError("cat amplitude must be >= 0");

  const double s_max = resolve_s_max(c, r.cat.alpha_mag());
  const double tau_d = c.get_double("decoherence.tau_d_ms") * 1e-3;
  try {
    r.decoherence = catseq::DecoherenceModel(s_max, tau_d);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("decoherence: ") + e.what());
  }

  const std::string orientation = c.get_string("molecule.orientation");
  if (orientation == "per_trial") {
    r.trial.orientation = molecule::OrientationMode::per_trial;
  } else if (orientation == "per_pulse") {
    r.trial.orientation = molecule::OrientationMode::per_pulse;
  } else if (orientation == "fixed") {
    r.trial.orientation = molecule::OrientationMode::fixed;
  } else {
    throw ConfigError("molecule.orientation must be per_trial|per_pulse|fixed");
  }
  r.trial.fixed_theta =
      c.get_double("molecule.fixed_theta_deg") * pi / 180.0;
  r.trial.integration.n_steps = c.get_int("molecule.rk4_steps");
  r.trial.integration.window_sigmas = c.get_double("molecule.window_sigmas");
  r.trial.integration.verify = false;
  if (r.trial.integration.n_steps < 100) {
    throw ConfigError("molecule.rk4_steps must be >= 100");
  }
  if (r.trial.integration.window_sigmas < 6) {
    throw ConfigError("molecule.window_sigmas must be >= 6");
  }

  r.sync = crystal::sync_check(
      r.ions.omega_in_phase, r.train.f_rep,
      2.0 * pi * c.get_double("crystal.d_omega_z_hz"),
      c.get_double("crystal.d_f_rep_hz"),
      1e-6 * c.get_double("crystal.max_wait_us"));

  r.seed = c.get_u64("run.seed");
  r.n_trials = c.get_int("run.n_trials");
  r.n_shots = c.get_int("run.n_shots");
  r.threads = c.get_int("run.threads");
  r.fock_cutoff = c.get_int("run.fock_cutoff");
  r.phi_points = c.get_int("run.phi_points");
  r.eta = c.get_double("run.eta");
  r.kick_list = c.get_int_list("run.kick_list");
  r.pulse_list = c.get_int_list("run.pulse_list");
  r.spectrum_grid_cm1 = c.get_list("run.spectrum_scan");
  r.out_dir = c.get_string("run.out_dir");
  if (c.has("run.measured_csv")) {
    r.measured_csv = c.get_string("run.measured_csv");
  }
  if (r.n_trials < 1) throw ConfigError("run.n_trials must be >= 1");
  if (r.n_shots < 0) throw ConfigError("run.n_shots must be >= 0");
  if (r.phi_points < 8) throw ConfigError("run.phi_points must be >= 8");
  if (r.eta < 0) throw ConfigError("run.eta must be >= 0");
  return r;
}

}  // namespace catspec::config
