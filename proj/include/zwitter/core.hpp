#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

// Core lattice types shared by every module. Lattice and measure conventions
// are pinned in docs/conventions.md.

namespace zwitter {

using Real = double;
using Complex = std::complex<double>;
using Array = Eigen::ArrayXXd;    // (n_z rows, n_p cols), index (z, p)
using CArray = Eigen::ArrayXXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Real pi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidDimensionsError : Error {
  using Error::Error;
};
struct GridMismatchError : Error {
  using Error::Error;
};
struct NormalizationError : Error {
  using Error::Error;
};
struct HermiticityError : Error {
  using Error::Error;
};
struct RealityError : Error {
  using Error::Error;
};
struct BoundaryMassError : Error {
  using Error::Error;
};
struct ConvergenceError : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};

/// Uniform periodic phase-space lattice plus physical constants.
///
/// Invariants: n_z, n_p even and >= 8; extents > 0; and the Wigner duality
/// dr == 2*dz (equivalently p_extent == pi*hbar*n_z/z_extent), so shifted
/// points z +- r/2 live on the z-lattice. Construct through make_grid.
struct GridSpec {
  int n_z = 0;
  int n_p = 0;
  Real z_extent = 0;
  Real p_extent = 0;
  Real hbar = 1;
  Real mass = 1;

  Real dz() const { return z_extent / n_z; }
  Real dp() const { return p_extent / n_p; }
  Real dk() const { return 2 * pi / z_extent; }
  Real dr() const { return 2 * pi * hbar / p_extent; }

  Real z(int j) const { return -0.5 * z_extent + j * dz(); }
  Real p(int a) const { return -0.5 * p_extent + a * dp(); }
  Real k(int l) const { return (l - n_z / 2) * dk(); }
  Real r(int c) const { return (c - n_p / 2) * dr(); }
  /// x-lattice == z-lattice (Dx = Dz).
  Real x(int i) const { return z(i); }

  /// Phase-space measure per node, dz*dp/(2*pi*hbar).
  Real cell_measure() const { return dz() * dp() / (2 * pi * hbar); }

  /// True when the (z,p) <-> x-lattice correspondence is available
  /// (square grid; dr == 2 dz holds for every grid made by make_grid).
  bool square() const { return n_z == n_p; }

  bool operator==(const GridSpec& o) const = default;
};

/// The p_extent that satisfies dr == 2 dz for given n_z, z_extent.
inline Real admissible_p_extent(int n_z, Real z_extent, Real hbar = 1) {
  return pi * hbar * n_z / z_extent;
}

/// Validating factory; throws InvalidDimensionsError naming the violated
/// constraint.
GridSpec make_grid(int n_z, int n_p, Real z_extent, Real p_extent,
                   Real hbar = 1, Real mass = 1);

/// Convenience: derives the admissible p_extent from the duality relations.
GridSpec make_wigner_grid(int n_z, int n_p, Real z_extent, Real hbar = 1,
                          Real mass = 1);

/// Real samples on the (z,p) lattice.
struct RealPhaseField {
  GridSpec grid;
  Array values;  // (n_z, n_p)

  RealPhaseField() = default;
  RealPhaseField(const GridSpec& g, Array v) : grid(g), values(std::move(v)) {
    check_shape();
  }
  static RealPhaseField zero(const GridSpec& g) {
    return {g, Array::Zero(g.n_z, g.n_p)};
  }
  void check_shape() const {
    if (values.rows() != grid.n_z || values.cols() != grid.n_p)
      throw GridMismatchError("field shape does not match grid");
  }
};

enum class Representation { ZP, ZR, KP };

/// Complex samples on one of the spectral lattices; the tag says which.
struct ComplexPhaseField {
  GridSpec grid;
  Representation rep = Representation::ZP;
  CArray values;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b,
                              const char* what) {
  if (!(a == b)) throw GridMismatchError(std::string(what) + ": grid mismatch");
}

/// Sum with the dz*dp/(2*pi*hbar) measure.
inline Real integrate_phase_space(const RealPhaseField& f) {
  return f.values.sum() * f.grid.cell_measure();
}

/// <f,g> = integrate(f*g). Throws GridMismatchError on different grids.
inline Real inner_product(const RealPhaseField& f, const RealPhaseField& g) {
  require_same_grid(f.grid, g.grid, "inner_product");
  return (f.values * g.values).sum() * f.grid.cell_measure();
}

inline Real norm(const RealPhaseField& f) {
  return std::sqrt(inner_product(f, f));
}

/// Probability mass in the 5-cell frame along every edge of the lattice.
/// `w` must be a density (nonnegative); used by the boundary monitors.
Real boundary_mass(const RealPhaseField& w, int cells = 5);

}  // namespace zwitter
