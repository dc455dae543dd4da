#include "catspec/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "catspec/constants.hpp"
#include "catspec/csv.hpp"

namespace catspec::molecule {

namespace {

using constants::electron_mass;
using constants::elementary_charge;
using constants::eps0;
using constants::hbar;
using constants::pi;
using constants::speed_of_light;

constexpr Complex kI{0.0, 1.0};

struct Envelope {
  // Gaussian field envelope exp(-t^2 / 4 tau_sigma^2) sampled at step
  // boundaries and midpoints: index 2k is t_k, 2k+1 the midpoint.
  std::vector<double> values;
  double h = 0;       // step
  double t_start = 0;
};

Envelope make_envelope(double tau_sigma, int n_steps, double window_sigmas) {
  Envelope env;
  env.t_start = -window_sigmas * tau_sigma;
  env.h = 2.0 * window_sigmas * tau_sigma / n_steps;
  env.values.resize(2 * n_steps + 1);
  for (int k = 0; k <= 2 * n_steps; ++k) {
    const double t = env.t_start + 0.5 * env.h * k;
    env.values[k] = std::exp(-t * t / (4.0 * tau_sigma * tau_sigma));
  }
  return env;
}

struct Derivative {
  // dc/dt for H = hbar w(t)/2 (|e><g| e^{i phi} + h.c.) + hbar Delta |g><g|
  // with w(t) = rabi_peak * envelope(t).
  double rabi_peak;
  double detuning;
  Complex coupling_phase;  // e^{i phi}

  void operator()(double envelope, const Complex& cg, const Complex& ce,
                  Complex& dcg, Complex& dce) const {
    const double half_rabi = 0.5 * rabi_peak * envelope;
    dcg = -kI * (detuning * cg + half_rabi * std::conj(coupling_phase) * ce);
    dce = -kI * (half_rabi * coupling_phase * cg);
  }
};

TlsState rk4_propagate(const TlsState& in, const Derivative& deriv,
                       const Envelope& env, int n_steps) {
  Complex cg = in.c_g, ce = in.c_e;
  const double h = env.h;
  Complex k1g, k1e, k2g, k2e, k3g, k3e, k4g, k4e;
  for (int k = 0; k < n_steps; ++k) {
    const double e0 = env.values[2 * k];
    const double e1 = env.values[2 * k + 1];
    const double e2 = env.values[2 * k + 2];
    deriv(e0, cg, ce, k1g, k1e);
    deriv(e1, cg + 0.5 * h * k1g, ce + 0.5 * h * k1e, k2g, k2e);
    deriv(e1, cg + 0.5 * h * k2g, ce + 0.5 * h * k2e, k3g, k3e);
    deriv(e2, cg + h * k3g, ce + h * k3e, k4g, k4e);
    cg += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
    ce += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
  }
  return TlsState{cg, ce};
}

int effective_steps(const PulseParams& pulse, const IntegrationOptions& opts) {
  // Keep the detuning phase advance below 0.02 rad per step so far
  // off-resonant points stay numerically clean.
  const double window = 2.0 * opts.window_sigmas * pulse.tau_sigma;
  const double demand = std::abs(pulse.detuning) * window / 0.02;
  return std::max(opts.n_steps, static_cast<int>(std::ceil(demand)));
}

TlsState propagate_once(const TlsState& state, const PulseParams& pulse,
                        const MolecularTransition& transition, int n_steps,
                        double window_sigmas) {
  Derivative deriv{
      2.0 * transition.dipole() * pulse.e0 * std::cos(pulse.theta) / hbar,
      pulse.detuning, std::exp(kI * pulse.phase)};
  const Envelope env = make_envelope(pulse.tau_sigma, n_steps, window_sigmas);
  return rk4_propagate(state, deriv, env, n_steps);
}

}  // namespace

MolecularTransition::MolecularTransition(double nu0_cm1_in, double f_eg_in)
    : nu0_cm1(nu0_cm1_in), f_eg(f_eg_in) {
  if (nu0_cm1 <= 0) throw DomainError("transition wavenumber must be > 0");
  if (f_eg <= 0) throw DomainError("oscillator strength must be > 0");
}

double MolecularTransition::omega0() const {
  return units::cm1_to_omega(nu0_cm1);
}

double MolecularTransition::dipole() const {
  return std::sqrt(f_eg * 3.0 * hbar * elementary_charge * elementary_charge /
                   (electron_mass * omega0()));
}

void PulseTrainSpec::validate() const {
  if (nu_center_cm1 <= 0) throw ConfigError("laser center must be > 0");
  if (i_avg < 0) throw ConfigError("average intensity must be >= 0");
  if (f_rep <= 0) throw ConfigError("repetition rate must be > 0");
  if (n_pulse < 0) throw ConfigError("pulse count must be >= 0");
  if (transform_limited && fwhm_cm1.has_value() == fwhm_s.has_value()) {
    throw ConfigError(
        "transform-limited pulses need exactly one of linewidth / duration");
  }
  if (!transform_limited && !fwhm_s.has_value()) {
    throw ConfigError("pulse duration required when not transform-limited");
  }
}

double PulseTrainSpec::fwhm_duration() const {
  if (fwhm_s) return *fwhm_s;
  if (fwhm_cm1) return units::fwhm_cm1_to_duration(*fwhm_cm1);
  throw ConfigError("pulse duration unspecified");
}

double PulseTrainSpec::tau_sigma() const {
  return fwhm_duration() / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

double PulseTrainSpec::peak_field() const {
  const double tau = fwhm_duration();
  return std::sqrt(i_avg / (f_rep * tau * std::sqrt(pi / std::numbers::ln2) *
                            eps0 * speed_of_light));
}

double PulseTrainSpec::detuning(const MolecularTransition& t) const {
  return units::cm1_to_omega(nu_center_cm1) - t.omega0();
}

TlsState propagate_pulse(const TlsState& state, const PulseParams& pulse,
                         const MolecularTransition& transition,
                         const IntegrationOptions& opts) {
  if (opts.window_sigmas < 6.0) {
    throw DomainError("integration window must cover >= 6 tau_sigma");
  }
  const int n_steps = effective_steps(pulse, opts);
  TlsState out =
      propagate_once(state, pulse, transition, n_steps, opts.window_sigmas);
  if (opts.verify) {
    const TlsState fine = propagate_once(state, pulse, transition,
                                         2 * n_steps, opts.window_sigmas);
    if (std::abs(fine.p_excited() - out.p_excited()) > 1e-8) {
      throw IntegrationError("step doubling moved P_e by more than 1e-8");
    }
  }
  const double drift = std::abs(out.norm_squared() - 1.0);
  if (drift > 1e-6) {
    throw NormalizationError("norm drift " + std::to_string(drift) +
                             " during pulse propagation");
  }
  return out;
}

TrialRecord run_trial(const PulseTrainSpec& spec,
                      const MolecularTransition& transition,
                      std::uint64_t seed, const TrialOptions& opts) {
  spec.validate();
  rng::SplitRng gen(seed);

  PulseParams pulse;
  pulse.e0 = spec.peak_field();
  pulse.tau_sigma = spec.tau_sigma();
  pulse.detuning = spec.detuning(transition);

  auto draw_theta = [&gen]() { return std::acos(1.0 - 2.0 * gen.uniform()); };

  TrialRecord record;
  record.p_e_after_pulse.reserve(spec.n_pulse);
  if (opts.orientation == OrientationMode::fixed) {
    pulse.theta = opts.fixed_theta;
  } else {
    pulse.theta = draw_theta();  // per-trial draw; redrawn below if per_pulse
  }

  const int n_steps = effective_steps(pulse, opts.integration);
  const Envelope env = make_envelope(pulse.tau_sigma, n_steps,
                                     opts.integration.window_sigmas);

  // The single-pulse propagator at phase 0 depends only on the
  // orientation, so when theta is frozen for the trial we build it once
  // and conjugate with diag(1, e^{i phi}) per pulse.
  Complex u00{1.0}, u01{0.0}, u10{0.0}, u11{1.0};
  auto build_propagator = [&](double theta) {
    Derivative deriv{
        2.0 * transition.dipole() * pulse.e0 * std::cos(theta) / hbar,
        pulse.detuning, Complex{1.0, 0.0}};
    const TlsState col_g = rk4_propagate(TlsState{1.0, 0.0}, deriv, env, n_steps);
    const TlsState col_e = rk4_propagate(TlsState{0.0, 1.0}, deriv, env, n_steps);
    u00 = col_g.c_g;
    u10 = col_g.c_e;
    u01 = col_e.c_g;
    u11 = col_e.c_e;
  };

  if (opts.orientation != OrientationMode::per_pulse) {
    build_propagator(pulse.theta);
  }

  TlsState state;
  for (int j = 0; j < spec.n_pulse; ++j) {
    if (opts.orientation == OrientationMode::per_pulse) {
      pulse.theta = draw_theta();
      build_propagator(pulse.theta);
    }
    const double phi = gen.uniform(0.0, 2.0 * pi);
    const Complex p = std::exp(kI * phi);
    // U(phi) = diag(1, e^{i phi}) U(0) diag(1, e^{-i phi})
    const Complex cg = state.c_g;
    const Complex ce = std::conj(p) * state.c_e;
    state.c_g = u00 * cg + u01 * ce;
    state.c_e = p * (u10 * cg + u11 * ce);

    record.p_e_after_pulse.push_back(state.p_excited());
    if (record.first_excitation_pulse < 0 &&
        state.p_excited() >= opts.excitation_threshold) {
      record.first_excitation_pulse = j;
    }
  }
  record.theta = pulse.theta;

  const double drift = std::abs(state.norm_squared() - 1.0);
  if (spec.n_pulse > 0 && drift > 1e-6) {
    throw NormalizationError("norm drift " + std::to_string(drift) +
                             " over pulse train");
  }
  return record;
}

namespace {

// Runs trials [0, n) with per-trial seeds, filling result slots in trial
// order so the reduction below is independent of the thread layout.
std::vector<TrialRecord> run_trials(const PulseTrainSpec& spec,
                                    const MolecularTransition& transition,
                                    int n_trials, std::uint64_t master_seed,
                                    const TrialOptions& opts, int threads) {
  if (n_trials < 1) throw DomainError("n_trials must be >= 1");
  spec.validate();

  // Verify the step choice once on the worst-case orientation instead of
  // per trial.
  if (spec.n_pulse > 0) {
    PulseParams probe;
    probe.e0 = spec.peak_field();
    probe.tau_sigma = spec.tau_sigma();
    probe.detuning = spec.detuning(transition);
    probe.theta = 0.0;
    IntegrationOptions check = opts.integration;
    check.verify = true;
    propagate_pulse(TlsState{}, probe, transition, check);
  }

  std::vector<TrialRecord> records(n_trials);
  const int n_threads =
      threads > 0 ? threads
                  : std::max(1u, std::thread::hardware_concurrency());
  auto worker = [&](int begin, int end) {
    TrialOptions local = opts;
    local.integration.verify = false;
    for (int k = begin; k < end; ++k) {
      records[k] =
          run_trial(spec, transition, rng::derive_seed(master_seed, k), local);
    }
  };
  if (n_threads == 1 || n_trials < 4 * n_threads) {
    worker(0, n_trials);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n_trials + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(n_trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

EnsembleResult reduce(const std::vector<double>& values) {
  EnsembleResult r;
  r.n_trials = static_cast<int>(values.size());
  long double sum = 0.0L;
  for (double v : values) sum += v;
  r.mean = static_cast<double>(sum / r.n_trials);
  if (r.n_trials > 1) {
    long double ss = 0.0L;
    for (double v : values) {
      const long double d = v - r.mean;
      ss += d * d;
    }
    const double var = static_cast<double>(ss / (r.n_trials - 1));
    r.stderr_mean = std::sqrt(var / r.n_trials);
  }
  return r;
}

}  // namespace

EnsembleResult ensemble_absorption(const PulseTrainSpec& spec,
                                   const MolecularTransition& transition,
                                   int n_trials, std::uint64_t master_seed,
                                   const TrialOptions& opts, int threads) {
  const auto records =
      run_trials(spec, transition, n_trials, master_seed, opts, threads);
  std::vector<double> finals(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    finals[k] = records[k].final_p_e();
  }
  return reduce(finals);
}

std::vector<EnsembleResult> ensemble_per_pulse(
    const PulseTrainSpec& spec, const MolecularTransition& transition,
    int n_trials, std::uint64_t master_seed, const TrialOptions& opts,
    int threads) {
  const auto records =
      run_trials(spec, transition, n_trials, master_seed, opts, threads);
  std::vector<EnsembleResult> out(spec.n_pulse);
  std::vector<double> column(records.size());
  for (int j = 0; j < spec.n_pulse; ++j) {
    for (std::size_t k = 0; k < records.size(); ++k) {
      column[k] = records[k].p_e_after_pulse[j];
    }
    out[j] = reduce(column);
  }
  return out;
}

SourceSpectrum spectrum_from_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  if (table.rows.size() < 3) {
    throw ConfigError(path + ": source spectrum needs >= 3 rows");
  }
  double total = 0, first_moment = 0, peak = 0;
  for (const auto& row : table.rows) {
    if (row.size() < 2) throw ConfigError(path + ": need two columns");
    total += row[1];
    first_moment += row[0] * row[1];
    peak = std::max(peak, row[1]);
  }
  if (total <= 0) throw ConfigError(path + ": spectrum has no weight");

  SourceSpectrum s;
  s.center_cm1 = first_moment / total;

  // FWHM from linearly interpolated half-maximum crossings.
  const double half = 0.5 * peak;
  double lo = table.rows.front()[0], hi = table.rows.back()[0];
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const double x0 = table.rows[i - 1][0], y0 = table.rows[i - 1][1];
    const double x1 = table.rows[i][0], y1 = table.rows[i][1];
    if (y0 < half && y1 >= half) {
      lo = x0 + (half - y0) / (y1 - y0) * (x1 - x0);
      break;
    }
  }
  for (std::size_t i = table.rows.size(); i-- > 1;) {
    const double x0 = table.rows[i - 1][0], y0 = table.rows[i - 1][1];
    const double x1 = table.rows[i][0], y1 = table.rows[i][1];
    if (y1 < half && y0 >= half) {
      hi = x0 + (y0 - half) / (y0 - y1) * (x1 - x0);
      break;
    }
  }
  s.fwhm_cm1 = hi - lo;
  if (s.fwhm_cm1 <= 0) throw ConfigError(path + ": could not extract FWHM");
  return s;
}

}  // namespace catspec::molecule
