#include "catspec/vibsolver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "catspec/constants.hpp"
#include "catspec/csv.hpp"
#include "catspec/spline.hpp"

namespace catspec::vibsolver {

namespace {

using constants::atomic_mass_unit;
using constants::bohr_radius;
using constants::debye;
using constants::electron_mass;
using constants::elementary_charge;
using constants::hartree;
using constants::hbar;
using constants::pi;

double unit_scale(const std::string& unit) {
  if (unit == "bohr") return bohr_radius;
  if (unit == "m") return 1.0;
  if (unit == "hartree") return hartree;
  if (unit == "j") return 1.0;
  if (unit == "debye") return debye;
  if (unit == "c_m") return 1.0;
  throw ConfigError("unknown curve unit: " + unit);
}

}  // namespace

double Curve1D::spacing() const {
  const auto n = grid.size();
  if (n < 16) throw DomainError("curve needs >= 16 grid points");
  if (values.size() != n) throw DomainError("grid/value length mismatch");
  const double dx = (grid(n - 1) - grid(0)) / static_cast<double>(n - 1);
  if (dx <= 0) throw DomainError("grid must increase");
  for (Eigen::Index i = 1; i < n; ++i) {
    const double step = grid(i) - grid(i - 1);
    if (std::abs(step - dx) > 1e-12 * std::abs(dx)) {
      throw DomainError("grid spacing not uniform at index " +
                        std::to_string(i));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(values(i))) throw DomainError("non-finite curve value");
  }
  return dx;
}

Curve1D load_curve_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  auto meta = [&](const char* key) -> std::string {
    auto it = table.metadata.find(key);
    if (it == table.metadata.end()) {
      throw ConfigError(path + ": missing '# " + std::string(key) +
                        ":' header");
    }
    return it->second;
  };
  const double xscale = unit_scale(meta("coordinate_unit"));
  const double yscale = unit_scale(meta("value_unit"));
  const double mass = std::stod(meta("reduced_mass_u")) * atomic_mass_unit;

  Curve1D curve;
  curve.reduced_mass = mass;
  curve.grid.resize(static_cast<Eigen::Index>(table.rows.size()));
  curve.values.resize(curve.grid.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() < 2) {
      throw ConfigError(path + ": curve rows need two columns");
    }
    curve.grid(static_cast<Eigen::Index>(r)) = table.rows[r][0] * xscale;
    curve.values(static_cast<Eigen::Index>(r)) = table.rows[r][1] * yscale;
  }
  curve.spacing();
  return curve;
}

void save_curve_csv(const std::string& path, const Curve1D& curve,
                    const std::string& coordinate_unit,
                    const std::string& value_unit) {
  csv::Table table;
  table.exact = true;
  table.metadata["coordinate_unit"] = coordinate_unit;
  table.metadata["value_unit"] = value_unit;
  table.metadata["reduced_mass_u"] =
      csv::format_double_exact(curve.reduced_mass / atomic_mass_unit);
  table.columns = {"coordinate", "value"};
  const double xs = unit_scale(coordinate_unit);
  const double ys = unit_scale(value_unit);
  for (Eigen::Index i = 0; i < curve.grid.size(); ++i) {
    table.rows.push_back({curve.grid(i) / xs, curve.values(i) / ys});
  }
  csv::write_file(path, table);
}

Curve1D resample(const Curve1D& curve, int n_points) {
  curve.spacing();
  if (n_points < 16) throw DomainError("resample needs >= 16 points");
  std::vector<double> x(curve.grid.data(), curve.grid.data() + curve.grid.size());
  std::vector<double> y(curve.values.data(),
                        curve.values.data() + curve.values.size());
  const CubicSpline spline(std::move(x), std::move(y));

  Curve1D out;
  out.reduced_mass = curve.reduced_mass;
  out.grid.resize(n_points);
  out.values.resize(n_points);
  const double a = curve.grid(0);
  const double b = curve.grid(curve.grid.size() - 1);
  for (int i = 0; i < n_points; ++i) {
    out.grid(i) = a + (b - a) * i / (n_points - 1);
    out.values(i) = spline(out.grid(i));
  }
  return out;
}

VibLevels dvr_solve(const Curve1D& potential, int n_levels, double edge_tol) {
  const double dx = potential.spacing();
  if (potential.reduced_mass <= 0) throw InvalidMass("reduced mass must be > 0");
  const int n = static_cast<int>(potential.grid.size());
  if (n_levels < 1 || n_levels > n) {
    throw DomainError("requested level count out of range");
  }

  // Sinc-DVR kinetic matrix on the uniform grid.
  const double scale =
      hbar * hbar / (2.0 * potential.reduced_mass * dx * dx);
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double t;
      if (i == j) {
        t = scale * pi * pi / 3.0;
      } else {
        const int d = i - j;
        t = scale * 2.0 * ((d % 2 == 0) ? 1.0 : -1.0) /
            (static_cast<double>(d) * d);
      }
      h(i, j) = t;
      h(j, i) = t;
    }
    h(i, i) += potential.values(i);
  }
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw NonHermitian("DVR Hamiltonian lost symmetry");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NonHermitian("DVR eigensolve failed");
  }

  VibLevels levels;
  levels.energies = solver.eigenvalues().head(n_levels);
  levels.wavefunctions =
      solver.eigenvectors().leftCols(n_levels) / std::sqrt(dx);
  levels.grid = potential.grid;
  levels.potential = potential.values;
  levels.spacing = dx;
  levels.reduced_mass = potential.reduced_mass;

  for (int k = 0; k < n_levels; ++k) {
    const auto psi = levels.wavefunctions.col(k);
    const double peak = psi.cwiseAbs().maxCoeff();
    const double edge = std::max(std::abs(psi(0)), std::abs(psi(n - 1)));
    if (edge > edge_tol * peak) {
      throw GridTooSmall("eigenfunction " + std::to_string(k) +
                         " has relative edge amplitude " +
                         std::to_string(edge / peak) +
                         "; extend the grid");
    }
  }
  return levels;
}

Transition transition_strength(const VibLevels& levels, const Curve1D& dipole,
                               int i, int j, bool allow_interpolation) {
  const int n_levels = static_cast<int>(levels.energies.size());
  if (i == j || i < 0 || j < 0 || i >= n_levels || j >= n_levels) {
    throw DomainError("transition needs two distinct computed levels");
  }

  Eigen::VectorXd mu_on_grid;
  const bool same_grid =
      dipole.grid.size() == levels.grid.size() &&
      (dipole.grid - levels.grid).cwiseAbs().maxCoeff() <=
          1e-12 * levels.spacing * levels.grid.size();
  if (same_grid) {
    mu_on_grid = dipole.values;
  } else if (allow_interpolation) {
    std::vector<double> x(dipole.grid.data(),
                          dipole.grid.data() + dipole.grid.size());
    std::vector<double> y(dipole.values.data(),
                          dipole.values.data() + dipole.values.size());
    const CubicSpline spline(std::move(x), std::move(y));
    mu_on_grid.resize(levels.grid.size());
    for (Eigen::Index k = 0; k < levels.grid.size(); ++k) {
      mu_on_grid(k) = spline(levels.grid(k));
    }
  } else {
    throw GridMismatch("dipole curve grid differs and interpolation is off");
  }

  Transition t;
  t.i = i;
  t.j = j;
  t.dipole = (levels.wavefunctions.col(i).array() * mu_on_grid.array() *
              levels.wavefunctions.col(j).array())
                 .sum() *
             levels.spacing;
  const double omega =
      std::abs(levels.energies(j) - levels.energies(i)) / hbar;
  t.wavenumber_cm1 = units::omega_to_cm1(omega);
  t.oscillator_strength =
      electron_mass * omega * t.dipole * t.dipole /
      (3.0 * hbar * elementary_charge * elementary_charge);
  return t;
}

ShiftReport anharmonic_shift_report(const VibLevels& levels) {
  if (levels.energies.size() < 2) throw DomainError("need >= 2 levels");

  const int n = static_cast<int>(levels.grid.size());
  int i_min = 0;
  for (int i = 1; i < n; ++i) {
    if (levels.potential(i) < levels.potential(i_min)) i_min = i;
  }

  // Quartic least-squares fit in a window around the minimum; window
  // half-width 2% of the grid span, at least 5 points per side.
  const double span = levels.grid(n - 1) - levels.grid(0);
  const double w = std::max(0.02 * span, 5.0 * levels.spacing);
  const double x0 = levels.grid(i_min);
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (std::abs(levels.grid(i) - x0) <= w) idx.push_back(i);
  }
  Eigen::MatrixXd design(idx.size(), 5);
  Eigen::VectorXd rhs(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double u = (levels.grid(idx[r]) - x0) / w;  // conditioning
    double p = 1.0;
    for (int c = 0; c < 5; ++c) {
      design(r, c) = p;
      p *= u;
    }
    rhs(r) = levels.potential(idx[r]);
  }
  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);

  // Stationary point of the quartic near u = 0 by Newton iteration.
  double u = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double g = c(1) + 2 * c(2) * u + 3 * c(3) * u * u + 4 * c(4) * u * u * u;
    const double gg = 2 * c(2) + 6 * c(3) * u + 12 * c(4) * u * u;
    if (gg <= 0) break;
    const double step = g / gg;
    u -= step;
    if (std::abs(step) < 1e-15) break;
  }
  const double curvature = (2 * c(2) + 6 * c(3) * u + 12 * c(4) * u * u) / (w * w);
  if (curvature <= 0) throw DomainError("potential has no local minimum");

  ShiftReport report;
  const double omega_h = std::sqrt(curvature / levels.reduced_mass);
  report.harmonic_cm1 = units::omega_to_cm1(omega_h);
  report.fundamental_cm1 =
      units::joule_to_cm1(levels.energies(1) - levels.energies(0));
  report.shift_cm1 = report.fundamental_cm1 - report.harmonic_cm1;
  return report;
}

}  // namespace catspec::vibsolver
