#pragma once

#include <Eigen/Dense>
#include <complex>

#include "catspec/errors.hpp"

// Truncated Fock-space spin-boson engine. One spin-1/2 tensored with a
// single harmonic mode cut off at `cutoff` levels. States are immutable
// values; every operation returns a new state, so independent sequences
// can be evaluated concurrently.
//
// The motional state is kept in the oscillator interaction picture:
// free evolution is the identity and event timing enters through the
// phase of displacement amplitudes.
namespace catspec::hilbert {

using Complex = std::complex<double>;

enum class Axis { x, y, z };
enum class Basis { z, y };

class SpinBosonState {
 public:
  // amplitudes: row 0 = spin up, row 1 = spin down; columns = Fock levels.
  SpinBosonState(Eigen::Matrix2Xcd amplitudes);

  static SpinBosonState ground(int cutoff);  // |up> (x) |0>
  // spin_up amplitude a, spin_down amplitude b, common motion vector.
  static SpinBosonState with_motion(Complex a, Complex b,
                                    const Eigen::VectorXcd& motion);

  int cutoff() const { return static_cast<int>(amps_.cols()); }
  const Eigen::Matrix2Xcd& amplitudes() const { return amps_; }

  double norm_squared() const;
  // Population in the top 10% of Fock levels.
  double leakage() const;
  double population_down() const;
  double mean_occupation() const;
  Complex mean_lowering() const;  // <a>
  Complex overlap(const SpinBosonState& other) const;
  // |<this|other>|; global-phase-free comparison.
  double fidelity(const SpinBosonState& other) const;

  SpinBosonState renormalized() const;

 private:
  Eigen::Matrix2Xcd amps_;
};

// Fock-space matrix of the lowering operator a.
Eigen::MatrixXcd lowering_operator(int cutoff);

// Dense unitary D(amp) = exp(amp a^dag - conj(amp) a) via Hermitian
// eigendecomposition of the generator; exactly unitary on the truncated
// space.
Eigen::MatrixXcd displacement_operator(Complex amp, int cutoff);

// Safe Fock cutoff for amplitudes up to alpha_max:
// ceil(|alpha|^2 + 8|alpha| + 8).
int auto_cutoff(double alpha_max);

// D(amp) applied to both spin components. Throws TruncationError if the
// resulting leakage exceeds leak_tol, InvalidAmplitude for non-finite amp.
SpinBosonState displaced(const SpinBosonState& state, Complex amp,
                         double leak_tol = 1e-6);

// Spin-dependent force: D(+amp) on the sigma_x eigenstate |+>, D(-amp)
// on |->, with the spin axis rotated by phi_plus about z.
SpinBosonState spin_conditional_displaced(const SpinBosonState& state,
                                          Complex amp, double phi_plus = 0.0,
                                          double leak_tol = 1e-6);

// exp(-i angle sigma_axis / 2) on the spin factor.
SpinBosonState rotated(const SpinBosonState& state, Axis axis, double angle);

// Exact probability of reading spin down, tracing out motion. Basis::y is
// realized as a fixed R_x(-pi/2) pre-rotation followed by z readout; the
// sign is chosen so that the geometric phase in the sequence raises
// P(down) near zero phase.
double measure_down(const SpinBosonState& state, Basis basis = Basis::z);

// Analytic coherent-state amplitudes c_n = e^{-|amp|^2/2} amp^n/sqrt(n!),
// renormalized after truncation. Throws TruncationError if the cutoff is
// below auto_cutoff(|amp|) or the truncated tail exceeds leak_tol.
Eigen::VectorXcd coherent_amplitudes(Complex amp, int cutoff,
                                     double leak_tol = 1e-6);

// |spin> (x) |amp> with spin up (spin=0) or down (spin=1).
SpinBosonState coherent_state(Complex amp, int cutoff, int spin = 0,
                              double leak_tol = 1e-6);

}  // namespace catspec::hilbert
