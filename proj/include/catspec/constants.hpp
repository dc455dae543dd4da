#pragma once

#include <cmath>
#include <numbers>

// CODATA-2018 values. All physical constants and unit conversions used
// anywhere in the library live here; everything internal is SI.
namespace catspec::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double bohr_radius = 5.29177210903e-11;      // m
inline constexpr double hartree = 4.3597447222071e-18;        // J
inline constexpr double debye = 3.33564095198152e-30;         // C m

}  // namespace catspec::constants

namespace catspec::units {

// Spectroscopic wavenumber (cm^-1) <-> angular frequency (rad/s).
inline double cm1_to_omega(double nu_cm1) {
  return 2.0 * constants::pi * constants::speed_of_light * 100.0 * nu_cm1;
}
inline double omega_to_cm1(double omega) {
  return omega / (2.0 * constants::pi * constants::speed_of_light * 100.0);
}

// Wavenumber (cm^-1) <-> energy (J).
inline double cm1_to_joule(double nu_cm1) {
  return constants::planck_h * constants::speed_of_light * 100.0 * nu_cm1;
}
inline double joule_to_cm1(double energy) {
  return energy / (constants::planck_h * constants::speed_of_light * 100.0);
}

// Photon wavevector magnitude (rad/m) for a transition at nu (cm^-1).
inline double photon_wavevector(double nu_cm1) {
  return 2.0 * constants::pi * 100.0 * nu_cm1;
}

// Gaussian transform limit: FWHM linewidth (cm^-1) <-> FWHM intensity
// duration (s). Time-bandwidth product 2 ln2 / pi.
inline double fwhm_cm1_to_duration(double fwhm_cm1) {
  const double dnu_hz = constants::speed_of_light * 100.0 * fwhm_cm1;
  return 2.0 * std::numbers::ln2 / (constants::pi * dnu_hz);
}
inline double duration_to_fwhm_cm1(double fwhm_s) {
  const double dnu_hz = 2.0 * std::numbers::ln2 / (constants::pi * fwhm_s);
  return dnu_hz / (constants::speed_of_light * 100.0);
}

}  // namespace catspec::units
