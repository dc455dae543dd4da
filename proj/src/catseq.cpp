#include "catspec/catseq.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "catspec/constants.hpp"

namespace catspec::catseq {

namespace {

using constants::pi;
constexpr Complex kI{0.0, 1.0};

double wrap_phase(double phi) {
  double w = std::fmod(phi, 2.0 * pi);
  if (w < 0) w += 2.0 * pi;
  return w;
}

}  // namespace

CatParams CatParams::from_alpha(double alpha_mag, double phi_minus) {
  if (alpha_mag < 0) throw DomainError("alpha magnitude must be >= 0");
  // Synthetic drive parameters; only the product eta_a*omega0*duration
  // enters the dynamics.
  CatParams p;
  p.eta_a = 1.0;
  p.omega0 = 2.0;
  p.duration = alpha_mag;
  p.phi_minus = wrap_phase(phi_minus);
  return p;
}

Complex CatParams::alpha() const {
  return -kI * alpha_mag() * std::exp(kI * phi_minus);
}

CatParams CatParams::with_phi_minus(double phi) const {
  CatParams p = *this;
  p.phi_minus = wrap_phase(phi);
  return p;
}

RecoilEvent RecoilEvent::at_time(double eta, double t, double omega_z) {
  RecoilEvent e;
  e.eta = eta;
  e.t_event = t;
  e.phase = -omega_z * t;
  return e;
}

Complex RecoilEvent::amplitude() const {
  return kI * eta * std::exp(kI * phase);
}

DecoherenceModel::DecoherenceModel(double s_max_in, double tau_d_in)
    : s_max(s_max_in), tau_d(tau_d_in) {
  if (s_max < 0 || s_max > 1) throw DomainError("s_max must be in [0, 1]");
  if (tau_d <= 0) throw DomainError("tau_d must be > 0");
}

double DecoherenceModel::factor(double t) const {
  return s_max * std::exp(-t / tau_d);
}

SpinBosonState generate_cat(const SpinBosonState& state, const CatParams& p) {
  return hilbert::spin_conditional_displaced(state, p.alpha(), p.phi_plus);
}

SpinBosonState reverse_cat(const SpinBosonState& state, const CatParams& p) {
  return hilbert::spin_conditional_displaced(state, p.alpha(),
                                             p.phi_plus + pi);
}

std::vector<RecoilEvent> make_kick_train(int n_kick, double eta_k,
                                         double spacing, double omega_z) {
  if (n_kick < 0) throw DomainError("kick count must be >= 0");
  if (eta_k < 0) throw DomainError("kick magnitude must be >= 0");
  std::vector<RecoilEvent> events;
  events.reserve(n_kick);
  for (int j = 0; j < n_kick; ++j) {
    events.push_back(RecoilEvent::at_time(eta_k, j * spacing, omega_z));
  }
  return events;
}

SpinBosonState kick_train(const SpinBosonState& state, int n_kick,
                          double eta_k, double spacing, double omega_z) {
  SpinBosonState out = state;
  for (const auto& e : make_kick_train(n_kick, eta_k, spacing, omega_z)) {
    out = hilbert::displaced(out, e.amplitude());
  }
  return out;
}

double analytic_signal(double eta, double alpha_mag) {
  if (eta < 0 || alpha_mag < 0) throw DomainError("eta, |alpha| must be >= 0");
  return std::sin(4.0 * eta * alpha_mag);
}

double analytic_signal(double eta, double alpha_mag,
                       const DecoherenceModel& model, double t) {
  return model.factor(t) * analytic_signal(eta, alpha_mag);
}

double direct_signal(double eta) { return 2.0 * eta; }

double run_sequence(const SequenceSpec& seq, double phi_minus) {
  double eta_total = 0.0;
  for (const auto& e : seq.recoils) eta_total += std::abs(e.eta);
  const int cutoff =
      seq.fock_cutoff > 0
          ? seq.fock_cutoff
          : hilbert::auto_cutoff(seq.cat.alpha_mag() + eta_total);

  const CatParams cat = seq.cat.with_phi_minus(phi_minus);
  SpinBosonState state = SpinBosonState::ground(cutoff);
  state = generate_cat(state, cat);
  for (const auto& e : seq.recoils) {
    state = hilbert::displaced(state, e.amplitude());
  }
  state = reverse_cat(state, cat);
  return hilbert::measure_down(
      state, seq.analyze_y ? hilbert::Basis::y : hilbert::Basis::z);
}

PhaseScanResult phase_scan(const SequenceSpec& seq, int n_points,
                           double residual_tol) {
  if (n_points < 8) throw DomainError("phase scan needs >= 8 points");

  PhaseScanResult result;
  result.phi.resize(n_points);
  result.population.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    result.phi[i] = 2.0 * pi * i / n_points;
    result.population[i] = run_sequence(seq, result.phi[i]);
  }

  // Odd harmonics below the grid Nyquist limit; 13 suffices for any
  // contrast this model can produce.
  for (int m = 1; 2 * m < n_points && m <= 13; m += 2) {
    result.harmonics.push_back(m);
  }

  const int n_par = 1 + 2 * static_cast<int>(result.harmonics.size());
  Eigen::MatrixXd design(n_points, n_par);
  Eigen::VectorXd y(n_points);
  for (int i = 0; i < n_points; ++i) {
    design(i, 0) = 1.0;
    int col = 1;
    for (int m : result.harmonics) {
      design(i, col++) = std::sin(m * result.phi[i]);
      design(i, col++) = std::cos(m * result.phi[i]);
    }
    y(i) = result.population[i];
  }
  const Eigen::VectorXd coeff =
      design.colPivHouseholderQr().solve(y);
  const double rss = (design * coeff - y).squaredNorm();
  result.fit_residual_rms = std::sqrt(rss / n_points);
  result.fit_offset = coeff(0);
  if (result.fit_residual_rms > residual_tol) {
    throw FitError("phase scan fit residual " +
                   std::to_string(result.fit_residual_rms) +
                   " exceeds tolerance " + std::to_string(residual_tol));
  }

  // Peak-to-peak of the fitted curve on a fine grid.
  double lo = coeff(0), hi = coeff(0);
  const int fine = 4096;
  for (int i = 0; i < fine; ++i) {
    const double phi = 2.0 * pi * i / fine;
    double v = coeff(0);
    int col = 1;
    for (int m : result.harmonics) {
      v += coeff(col++) * std::sin(m * phi);
      v += coeff(col++) * std::cos(m * phi);
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  result.peak_to_peak = hi - lo;
  return result;
}

}  // namespace catspec::catseq
