#pragma once

#include "zwitter/core.hpp"
#include "zwitter/evolution.hpp"
#include "zwitter/observables.hpp"
#include "zwitter/state.hpp"
#include "zwitter/transforms.hpp"

#include <optional>
#include <string>
#include <vector>

// Reproducible experiment drivers: double-slit interference against gamma,
// zwitter ground-state spectroscopy (energy width and shift), gamma-scaling
// scans, and the double-well proximity study. Drivers return data; file
// emission lives in the CLI.

namespace zwitter {

// ---- double slit ----

struct DoubleSlitConfig {
  GridSpec grid;
  Real separation = 12;
  Real sigma = 0.45;
  Real p0 = 0;
  /// Weak confining envelope; with V = 0 the quantum and classical
  /// generators coincide and every gamma evolves identically.
  Potential envelope = Potential::quartic(0.0, 2e-4);
  std::vector<Real> gammas = {0.0, 0.7, pi / 2};
  Real dt = 2e-3;
  Real horizon = 4;
  SplitScheme scheme = SplitScheme::Strang;
};

struct FringeProfile {
  Real gamma = 0;
  PositionDistribution marginal;  // quantum position distribution at T
  Real visibility = 0;            // central-window (I_max-I_min)/(I_max+I_min)
};

struct DoubleSlitResult {
  std::vector<FringeProfile> profiles;        // one per gamma
  PositionDistribution classical_marginal;    // of w at gamma = pi/2
  FringeProfile oracle;                       // Schrodinger lane at gamma = 0
  Real fringe_spacing_measured = 0;           // on the gamma = 0 profile
  Real fringe_spacing_expected = 0;           // 2 pi hbar T / (m d)
};

/// Fringe visibility over the central `window_fraction` of the domain.
Real fringe_visibility(const PositionDistribution& marginal,
                       Real window_fraction = 0.5);
/// Mean spacing of adjacent interior peaks in the central window.
Real fringe_spacing(const PositionDistribution& marginal,
                    Real window_fraction = 0.5);

DoubleSlitResult run_double_slit(const DoubleSlitConfig& cfg);

// ---- zwitter ground state and spectroscopy ----

struct GroundStateConfig {
  GridSpec grid;
  Potential potential = Potential::quartic(1.0, 0.1);
  Real dt = 4e-3;
  SplitScheme scheme = SplitScheme::Yoshida4;
  Real relax_horizon = 10;
  Real averaging_window = 120;
  int sample_stride = 25;        // steps between density-matrix samples
  Real spectrum_tol = 1e-10;
};

struct SpectroscopyResult {
  Real gamma = 0;
  Real e0 = 0;           // quantum ground-state energy on this grid
  Real mean_energy = 0;  // Tr(rho H)
  Real delta_e = 0;      // sqrt(Tr(rho H^2) - Tr(rho H)^2)
  Real shift_e = 0;      // mean_energy - e0
  Real f1_effective = 0; // delta_e / (sin^2 gamma |e0|), 0 at gamma = 0
  Real f2_effective = 0; // shift_e / (sin^2 gamma delta_e), 0 when undefined
  bool stationary = true;
  Real window_drift = 0; // relative drift between window halves
  // provenance
  int n_z = 0, n_p = 0;
  Real dt = 0, t_relax = 0, t_average = 0;
};

struct GroundStateOutput {
  SpectroscopyResult result;
  CoarseDensityMatrix averaged_rho;
  QuantumWaveFunction psi0;
};

/// Evolve the quantum ground state under the gamma generator, time-average
/// the coarse density matrix over a Hann window, and read the energy
/// statistics off the averaged matrix.
GroundStateOutput zwitter_ground_state(const GroundStateConfig& cfg, Real gamma);

struct PowerLawFit {
  Real slope = 0;
  Real intercept = 0;
  Real r_squared = 0;
  std::vector<Real> residuals;
};

/// Least squares of y against x (both already in log space).
PowerLawFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y);

struct GammaScanResult {
  std::vector<SpectroscopyResult> rows;
  PowerLawFit de_fit;     // log dE vs log sin^2 gamma
  PowerLawFit ratio_fit;  // log (shift/dE) vs log sin^2 gamma
};

/// Runs zwitter_ground_state per gamma (gamma = 0 rows are reported but
/// excluded from fits). Throws ConvergenceError with fewer than 4 usable
/// points.
GammaScanResult scan_gamma(const GroundStateConfig& cfg,
                           const std::vector<Real>& gammas);

// ---- double-well proximity ----

struct DoubleWellConfig {
  GroundStateConfig base;
  std::vector<Real> gammas = {0.02, 0.04, 0.06, 0.09, 0.13};
  unsigned seed = 20260809;
  int bootstrap_samples = 200;
};

struct DoubleWellReport {
  Real splitting = 0;  // E1 - E0
  std::vector<SpectroscopyResult> rows;
  std::vector<Real> ratios;  // delta_e(gamma) / splitting
  std::optional<Real> crossing_gamma;       // where dE == splitting
  std::optional<Real> crossing_uncertainty; // residual bootstrap sigma
};

DoubleWellReport run_double_well_proximity(const DoubleWellConfig& cfg);

}  // namespace zwitter
