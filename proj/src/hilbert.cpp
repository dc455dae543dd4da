#include "catspec/hilbert.hpp"

#include <cmath>

#include "catspec/constants.hpp"

namespace catspec::hilbert {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_finite(Complex amp) {
  if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
    throw InvalidAmplitude("displacement amplitude is not finite");
  }
}

void check_leakage(const SpinBosonState& state, double tol, const char* op) {
  const double leak = state.leakage();
  if (leak > tol) {
    throw TruncationError(std::string(op) + ": truncation leakage " +
                          std::to_string(leak) + " exceeds tolerance " +
                          std::to_string(tol) + " at cutoff " +
                          std::to_string(state.cutoff()));
  }
}

Eigen::Matrix2cd pauli(Axis axis) {
  Eigen::Matrix2cd s;
  switch (axis) {
    case Axis::x: s << 0, 1, 1, 0; break;
    case Axis::y: s << 0, -kI, kI, 0; break;
    case Axis::z: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

SpinBosonState::SpinBosonState(Eigen::Matrix2Xcd amplitudes)
    : amps_(std::move(amplitudes)) {
  if (amps_.cols() < 2) throw DomainError("Fock cutoff must be >= 2");
}

SpinBosonState SpinBosonState::ground(int cutoff) {
  Eigen::Matrix2Xcd a = Eigen::Matrix2Xcd::Zero(2, cutoff);
  a(0, 0) = 1.0;
  return SpinBosonState(std::move(a));
}

SpinBosonState SpinBosonState::with_motion(Complex up, Complex down,
                                           const Eigen::VectorXcd& motion) {
  Eigen::Matrix2Xcd a(2, motion.size());
  a.row(0) = up * motion.transpose();
  a.row(1) = down * motion.transpose();
  return SpinBosonState(std::move(a));
}

double SpinBosonState::norm_squared() const { return amps_.squaredNorm(); }

double SpinBosonState::leakage() const {
  const int n = cutoff();
  const int top = std::max(1, n / 10);
  return amps_.rightCols(top).squaredNorm();
}

double SpinBosonState::population_down() const {
  return amps_.row(1).squaredNorm();
}

double SpinBosonState::mean_occupation() const {
  double sum = 0.0;
  for (int n = 1; n < cutoff(); ++n) sum += n * amps_.col(n).squaredNorm();
  return sum;
}

Complex SpinBosonState::mean_lowering() const {
  Complex sum = 0.0;
  for (int n = 1; n < cutoff(); ++n) {
    sum += std::sqrt(static_cast<double>(n)) *
           (std::conj(amps_(0, n - 1)) * amps_(0, n) +
            std::conj(amps_(1, n - 1)) * amps_(1, n));
  }
  return sum;
}

Complex SpinBosonState::overlap(const SpinBosonState& other) const {
  if (other.cutoff() != cutoff()) throw DomainError("cutoff mismatch");
  return (amps_.conjugate().cwiseProduct(other.amps_)).sum();
}

double SpinBosonState::fidelity(const SpinBosonState& other) const {
  return std::abs(overlap(other));
}

SpinBosonState SpinBosonState::renormalized() const {
  return SpinBosonState(amps_ / std::sqrt(norm_squared()));
}

Eigen::MatrixXcd lowering_operator(int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Eigen::MatrixXcd displacement_operator(Complex amp, int cutoff) {
  require_finite(amp);
  // Generator K = amp a^dag - conj(amp) a is anti-Hermitian; H = -iK is
  // Hermitian by construction, so exp(K) = V exp(i diag(lambda)) V^dag.
  const Eigen::MatrixXcd a = lowering_operator(cutoff);
  const Eigen::MatrixXcd h =
      -kI * (amp * a.adjoint() - std::conj(amp) * a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NonHermitian("displacement generator eigendecomposition failed");
  }
  const Eigen::VectorXcd phases =
      (kI * solver.eigenvalues().array()).exp().matrix();
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

int auto_cutoff(double alpha_max) {
  const double a = std::abs(alpha_max);
  return static_cast<int>(std::ceil(a * a + 8.0 * a + 8.0));
}

SpinBosonState displaced(const SpinBosonState& state, Complex amp,
                         double leak_tol) {
  require_finite(amp);
  const Eigen::MatrixXcd d = displacement_operator(amp, state.cutoff());
  SpinBosonState out(state.amplitudes() * d.transpose());
  check_leakage(out, leak_tol, "displaced");
  return out;
}

SpinBosonState spin_conditional_displaced(const SpinBosonState& state,
                                          Complex amp, double phi_plus,
                                          double leak_tol) {
  require_finite(amp);
  const int n = state.cutoff();
  const Eigen::MatrixXcd d_plus = displacement_operator(amp, n);

  // Switch to the sigma_x eigenbasis, displace the |+> and |-> rows by
  // +/- amp, switch back. A nonzero phi_plus tilts the conditioning axis
  // in the equatorial plane: sigma_phi = Rz(-phi_plus) sigma_x Rz(phi_plus).
  Eigen::Matrix2cd w;
  w << 1, 1, 1, -1;
  w /= std::sqrt(2.0);

  SpinBosonState in = state;
  if (phi_plus != 0.0) in = rotated(in, Axis::z, phi_plus);

  Eigen::Matrix2Xcd pm = w * in.amplitudes();
  Eigen::Matrix2Xcd out(2, n);
  out.row(0) = pm.row(0) * d_plus.transpose();
  out.row(1) = pm.row(1) * d_plus.adjoint().transpose();  // D(-amp) = D(amp)^dag
  SpinBosonState result((w * out).eval());
  if (phi_plus != 0.0) result = rotated(result, Axis::z, -phi_plus);
  check_leakage(result, leak_tol, "spin_conditional_displaced");
  return result;
}

SpinBosonState rotated(const SpinBosonState& state, Axis axis, double angle) {
  const Eigen::Matrix2cd r =
      std::cos(angle / 2.0) * Eigen::Matrix2cd::Identity() -
      kI * std::sin(angle / 2.0) * pauli(axis);
  return SpinBosonState(r * state.amplitudes());
}

double measure_down(const SpinBosonState& state, Basis basis) {
  if (basis == Basis::z) return state.population_down();
  return rotated(state, Axis::x, -constants::pi / 2.0).population_down();
}

Eigen::VectorXcd coherent_amplitudes(Complex amp, int cutoff, double leak_tol) {
  require_finite(amp);
  if (cutoff < auto_cutoff(std::abs(amp))) {
    throw TruncationError("coherent_amplitudes: cutoff " +
                          std::to_string(cutoff) + " below safe cutoff " +
                          std::to_string(auto_cutoff(std::abs(amp))));
  }
  Eigen::VectorXcd c(cutoff);
  c(0) = std::exp(-0.5 * std::norm(amp));
  for (int n = 1; n < cutoff; ++n) {
    c(n) = c(n - 1) * amp / std::sqrt(static_cast<double>(n));
  }
  const double tail = 1.0 - c.squaredNorm();
  if (tail > leak_tol) {
    throw TruncationError("coherent_amplitudes: truncated tail " +
                          std::to_string(tail) + " exceeds tolerance");
  }
  return c / c.norm();
}

SpinBosonState coherent_state(Complex amp, int cutoff, int spin,
                              double leak_tol) {
  const Eigen::VectorXcd motion = coherent_amplitudes(amp, cutoff, leak_tol);
  return SpinBosonState::with_motion(spin == 0 ? 1.0 : 0.0,
                                     spin == 0 ? 0.0 : 1.0, motion);
}

}  // namespace catspec::hilbert
