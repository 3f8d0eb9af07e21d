#pragma once

#include "zwitter/core.hpp"
#include "zwitter/state.hpp"

// The quantum transform of the probability density and the coarse-graining
// chain psi_C -> psi~(x,y) -> rho_Q(x,x') -> rho_w(z,p). The pipeline and the
// directly factorized quantum_transform are distinct code paths; their
// pointwise agreement is a test target, and a quadruple-sum oracle on tiny
// grids guards the factorization itself.

namespace zwitter {

/// Complex amplitudes psi~(x,y) on x-lattice x x-lattice (square grids only).
struct XYWaveFunction {
  GridSpec grid;
  CMatrix values;  // (row = x index, col = y index)

  /// Sum |psi~|^2 dx dy; 1 for normalized inputs (exact Plancherel).
  Real squared_norm() const {
    return values.squaredNorm() * grid.dz() * grid.dz();
  }
};

/// rho_Q(x,x') with its measure weight dx.
struct CoarseDensityMatrix {
  GridSpec grid;
  CMatrix rho;
  Real dx = 0;

  Real trace() const { return rho.trace().real() * dx; }
  Real purity() const { return (rho * rho).trace().real() * dx * dx; }
  Real hermiticity_defect() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  }
  /// Smallest eigenvalue of the trace-1 operator rho*dx.
  Real min_eigenvalue() const;
  /// Throws unless Hermitian (1e-10), trace 1 (1e-8), eigenvalues >= -1e-8.
  void validate() const;
};

/// Fourier transform of psi_C from p to the relative coordinate, relabeled to
/// (x,y) with z = (x+y)/2, r = x-y. Even x-y separations are an exact
/// relabeling of the fine (z,r) data; odd separations use the exact
/// band-limited half-cell shift. Requires a square Wigner-compatible grid.
XYWaveFunction to_xy_representation(const ClassicalWaveFunction& psi_c);
XYWaveFunction to_xy_representation(const RealPhaseField& psi_c);

/// Inverse through the even-separation pairs; exact round trip.
RealPhaseField from_xy_representation(const XYWaveFunction& xy);

/// Subtrace rho_Q(x,x') = sum_y psi~(x,y) conj(psi~(x',y)) dy. The rank-
/// structured four-index density matrix is never materialized.
CoarseDensityMatrix coarse_grain(const XYWaveFunction& xy);

/// Wigner transform of a density matrix (conventions doc); real field with
/// unit integral equal to the trace.
RealPhaseField wigner_of_density_matrix(const CoarseDensityMatrix& rho);

/// The quantum transform of psi_C evaluated through its factorized spectral
/// form (shifted fine-r transforms contracted along anti-diagonals), not
/// through coarse_grain.
RealPhaseField quantum_transform(const ClassicalWaveFunction& psi_c);
RealPhaseField quantum_transform(const RealPhaseField& psi_c);

/// Convenience: full pipeline rho_w = Wigner(coarse_grain(to_xy(psi_C))).
RealPhaseField quantum_transform_via_density_matrix(const RealPhaseField& psi_c);

struct PositionDistribution {
  Vector z;
  Vector density;  // per unit length; sum(density)*dz = field integral
};

/// Marginal over p of a unit-integral phase-space field. For quasi-
/// probabilities small negative values are reported unclipped.
PositionDistribution position_distribution(const RealPhaseField& f);

}  // namespace zwitter
