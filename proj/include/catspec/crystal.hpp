#pragma once

#include <Eigen/Dense>

#include "catspec/errors.hpp"

// Axial normal modes of a mixed-species two-ion crystal (equal unit
// charges, common harmonic axial confinement, Coulomb coupling at the
// equilibrium spacing) and the Lamb-Dicke parameters built from them.
namespace catspec::crystal {

struct IonCrystal {
  double m_atom = 0;        // kg
  double m_mol = 0;         // kg
  double omega_single = 0;  // rad/s, atomic ion alone
  double omega_in_phase = 0;
  double omega_out_phase = 0;
  // Mass-weighted participation (atom, molecule); orthonormal pair.
  Eigen::Vector2d mode_in_phase = Eigen::Vector2d::Zero();
  Eigen::Vector2d mode_out_phase = Eigen::Vector2d::Zero();
  double spacing = 0;  // m
};

struct LaserGeometry {
  double wavenumber = 0;  // rad/m
  double cos_chi = 1.0;   // projection of the wavevector onto the trap axis
};

enum class IonKind { atom, molecule };

// Solves the 2x2 mass-weighted axial eigenproblem. Throws InvalidMass for
// non-positive inputs.
IonCrystal solve_modes(double m_atom, double m_mol, double omega_single);

// Single-ion frequency that puts the in-phase mode at the requested value.
double omega_single_for_in_phase(double m_atom, double m_mol,
                                 double omega_in_phase_target);

// eta = sqrt(hbar / (2 M omega_z)) * k_z * e_z for the selected ion, with
// k_z = wavenumber * cos_chi and e_z its mass-weighted in-phase
// participation.
double lamb_dicke(const IonCrystal& crystal, const LaserGeometry& geometry,
                  IonKind which);

// Raw formula, for callers that already know all four factors.
double lamb_dicke_param(double mass, double omega_z, double k_axial,
                        double participation);

struct SyncReport {
  double ratio = 0;          // omega_z / (2 pi f_rep)
  bool integer_sync = false;
  // Worst-case drift of the displacement phase over `wait`:
  // (d_omega_z + omega_z * d_f_rep / f_rep) * wait.
  double phase_spread = 0;
};

SyncReport sync_check(double omega_z, double f_rep, double d_omega_z = 0,
                      double d_f_rep = 0, double wait = 0);

}  // namespace catspec::crystal
