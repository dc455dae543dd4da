#pragma once

#include <stdexcept>
#include <string>

namespace catspec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fock-space truncation leakage above tolerance.
struct TruncationError : Error { using Error::Error; };
// Non-finite displacement or coherent amplitude.
struct InvalidAmplitude : Error { using Error::Error; };
// Non-positive mass or trap frequency.
struct InvalidMass : Error { using Error::Error; };
// ODE step-doubling check failed to converge.
struct IntegrationError : Error { using Error::Error; };
// State norm drifted beyond tolerance during propagation.
struct NormalizationError : Error { using Error::Error; };
// Eigenfunction amplitude at the grid edge too large.
struct GridTooSmall : Error { using Error::Error; };
// Symmetry of an operator matrix violated (internal consistency).
struct NonHermitian : Error { using Error::Error; };
// Curves on different grids with interpolation disabled.
struct GridMismatch : Error { using Error::Error; };
// Least-squares residual of a phase-scan fit above tolerance.
struct FitError : Error { using Error::Error; };
// Bad or inconsistent run configuration.
struct ConfigError : Error { using Error::Error; };
// Argument outside its mathematical domain.
struct DomainError : Error { using Error::Error; };

}  // namespace catspec
