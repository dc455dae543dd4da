#pragma once

#include <Eigen/Dense>
#include <string>

#include "catspec/errors.hpp"

// One-dimensional anharmonic vibrational eigensolver on a uniform grid,
// using the sinc discrete variable representation: the potential is
// diagonal and the kinetic matrix has closed-form elements.
namespace catspec::vibsolver {

// Sampled 1D curve in SI units (grid in m; values in J for potentials or
// C m for dipole curves) plus the reduced mass of the coordinate.
struct Curve1D {
  Eigen::VectorXd grid;    // strictly increasing, uniform
  Eigen::VectorXd values;
  double reduced_mass = 0; // kg

  double spacing() const;  // checks uniformity to 1e-12 relative
};

// File format: two numeric columns (coordinate, value) preceded by
//   # coordinate_unit: bohr|m
//   # value_unit: hartree|j|debye|c_m
//   # reduced_mass_u: <mass in u>
Curve1D load_curve_csv(const std::string& path);
void save_curve_csv(const std::string& path, const Curve1D& curve,
                    const std::string& coordinate_unit,
                    const std::string& value_unit);

// Natural-cubic-spline resample onto a finer uniform grid with the same
// span.
Curve1D resample(const Curve1D& curve, int n_points);

struct VibLevels {
  Eigen::VectorXd energies;       // J, ascending
  Eigen::MatrixXd wavefunctions;  // column i = level i, quadrature-normalized
  Eigen::VectorXd grid;           // m
  Eigen::VectorXd potential;      // J, on grid
  double spacing = 0;             // m
  double reduced_mass = 0;        // kg
};

// Lowest n_levels eigenpairs of T + V. Throws GridTooSmall when any
// requested eigenfunction has edge amplitude above edge_tol relative to
// its maximum, NonHermitian if the assembled Hamiltonian is asymmetric.
VibLevels dvr_solve(const Curve1D& potential, int n_levels,
                    double edge_tol = 1e-6);

struct Transition {
  int i = 0, j = 0;
  double wavenumber_cm1 = 0;
  double dipole = 0;               // C m, signed
  double oscillator_strength = 0;  // m_e omega |mu|^2 / (3 hbar e^2)
};

// Grid-quadrature transition moment between levels i and j. A dipole
// curve on a different grid is spline-interpolated when
// allow_interpolation is set, otherwise GridMismatch is thrown.
Transition transition_strength(const VibLevels& levels, const Curve1D& dipole,
                               int i, int j, bool allow_interpolation = true);

struct ShiftReport {
  double fundamental_cm1 = 0;  // E1 - E0
  double harmonic_cm1 = 0;     // from a quartic fit around the minimum
  double shift_cm1 = 0;        // fundamental - harmonic
};

// Compares the fundamental against the harmonic frequency of the
// potential curvature at its minimum (local quartic least-squares fit,
// curvature evaluated at the fitted stationary point).
ShiftReport anharmonic_shift_report(const VibLevels& levels);

}  // namespace catspec::vibsolver
