#include "catspec/crystal.hpp"

#include <cmath>

#include "catspec/constants.hpp"

namespace catspec::crystal {

namespace {

using constants::elementary_charge;
using constants::eps0;
using constants::hbar;
using constants::pi;

// Dimensionless mass-weighted Hessian in units of omega_single^2, for
// mass ratio r = m_mol / m_atom. At equilibrium the Coulomb curvature
// equals the trap curvature, giving diagonal 2 and coupling -1 before
// mass weighting.
Eigen::Matrix2d scaled_hessian(double r) {
  Eigen::Matrix2d a;
  a << 2.0, -1.0 / std::sqrt(r), -1.0 / std::sqrt(r), 2.0 / r;
  return a;
}

}  // namespace

IonCrystal solve_modes(double m_atom, double m_mol, double omega_single) {
  if (m_atom <= 0 || m_mol <= 0) throw InvalidMass("ion masses must be > 0");
  if (omega_single <= 0) throw InvalidMass("trap frequency must be > 0");

  IonCrystal c;
  c.m_atom = m_atom;
  c.m_mol = m_mol;
  c.omega_single = omega_single;

  const double k_trap = m_atom * omega_single * omega_single;
  const double coulomb = elementary_charge * elementary_charge /
                         (4.0 * pi * eps0);
  c.spacing = std::cbrt(2.0 * coulomb / k_trap);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(
      scaled_hessian(m_mol / m_atom));
  const Eigen::Vector2d lambda = solver.eigenvalues();  // ascending
  c.omega_in_phase = omega_single * std::sqrt(lambda(0));
  c.omega_out_phase = omega_single * std::sqrt(lambda(1));

  Eigen::Vector2d in = solver.eigenvectors().col(0);
  Eigen::Vector2d out = solver.eigenvectors().col(1);
  // Fix sign conventions: in-phase components positive, out-of-phase with
  // positive atom component.
  if (in(0) < 0) in = -in;
  if (out(0) < 0) out = -out;
  c.mode_in_phase = in;
  c.mode_out_phase = out;
  return c;
}

double omega_single_for_in_phase(double m_atom, double m_mol,
                                 double omega_in_phase_target) {
  if (m_atom <= 0 || m_mol <= 0) throw InvalidMass("ion masses must be > 0");
  if (omega_in_phase_target <= 0) {
    throw InvalidMass("target mode frequency must be > 0");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(
      scaled_hessian(m_mol / m_atom));
  return omega_in_phase_target / std::sqrt(solver.eigenvalues()(0));
}

double lamb_dicke_param(double mass, double omega_z, double k_axial,
                        double participation) {
  return std::sqrt(hbar / (2.0 * mass * omega_z)) * k_axial * participation;
}

double lamb_dicke(const IonCrystal& crystal, const LaserGeometry& geometry,
                  IonKind which) {
  if (geometry.wavenumber <= 0) throw DomainError("wavenumber must be > 0");
  const double mass = which == IonKind::atom ? crystal.m_atom : crystal.m_mol;
  const double e_z = which == IonKind::atom ? crystal.mode_in_phase(0)
                                            : crystal.mode_in_phase(1);
  return lamb_dicke_param(mass, crystal.omega_in_phase,
                          geometry.wavenumber * geometry.cos_chi, e_z);
}

SyncReport sync_check(double omega_z, double f_rep, double d_omega_z,
                      double d_f_rep, double wait) {
  if (omega_z <= 0 || f_rep <= 0) {
    throw DomainError("sync_check requires positive frequencies");
  }
  SyncReport report;
  report.ratio = omega_z / (2.0 * pi * f_rep);
  report.integer_sync =
      std::abs(report.ratio - std::round(report.ratio)) < 1e-9 * report.ratio;
  report.phase_spread =
      (std::abs(d_omega_z) + omega_z * std::abs(d_f_rep) / f_rep) *
      std::abs(wait);
  return report;
}

}  // namespace catspec::crystal
