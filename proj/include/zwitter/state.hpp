#pragma once

#include "zwitter/core.hpp"

#include <optional>
#include <string>
#include <vector>

// States: probability densities w, classical wave functions psi_C with
// w = psi_C^2, quantum wave functions psi_Q on the x-lattice, closed-form
// potentials, and ground/excited-state preparation.

namespace zwitter {

/// Closed-form potential, evaluable (with derivative) at any real argument.
/// Kinds: harmonic(omega), quartic(omega, lambda) = m w^2 z^2/2 + lambda z^4,
/// double_well(a, b) = a z^4 - b z^2 + b^2/(4a), gaussian_barrier(height,
/// width, centers).
class Potential {
 public:
  enum class Kind { Harmonic, Quartic, DoubleWell, GaussianBarrier };

  static Potential harmonic(Real omega);
  static Potential quartic(Real omega, Real lambda);
  static Potential double_well(Real a, Real b);
  static Potential gaussian_barrier(Real height, Real width,
                                    std::vector<Real> centers);
  /// Parse "quartic:omega=1,lambda=0.1" style strings (CLI format).
  static Potential parse(const std::string& text);

  Real operator()(Real x) const;
  Real deriv(Real x) const;
  Kind kind() const { return kind_; }
  const std::vector<Real>& params() const { return params_; }
  std::string str() const;

  /// Heuristic: rises by at least `margin` from its interior minimum before
  /// the domain edge. Barrier-only potentials fail this.
  bool is_confining(const GridSpec& g, Real margin = 0.5) const;

 private:
  Potential(Kind k, std::vector<Real> p) : kind_(k), params_(std::move(p)) {}
  Kind kind_;
  std::vector<Real> params_;
};

/// Free particle stand-in (V = 0): harmonic with omega = 0.
Potential free_potential();

struct ProbabilityDensity {
  RealPhaseField field;

  /// Validates w >= 0 and unit integral (1e-9).
  static ProbabilityDensity checked(RealPhaseField w);
  /// Wraps without validation (for structurally safe constructions).
  static ProbabilityDensity unchecked(RealPhaseField w) { return {std::move(w)}; }
};

struct SignRule {
  enum class Kind { AllPositive, FromReference } kind = Kind::AllPositive;
  const RealPhaseField* reference = nullptr;

  static SignRule all_positive() { return {}; }
  static SignRule from_reference(const RealPhaseField& g) {
    return {Kind::FromReference, &g};
  }
};

struct ClassicalWaveFunction {
  RealPhaseField field;
  std::string sign_provenance;
};

/// Complex wave function on the x-lattice (n_z samples, dx = dz).
struct QuantumWaveFunction {
  GridSpec grid;
  CVector values;

  Real norm() const { return std::sqrt(values.squaredNorm() * grid.dz()); }
};

struct SpectrumSlice {
  Real e0 = 0;
  Real e1 = 0;
  QuantumWaveFunction psi0;
  QuantumWaveFunction psi1;
  Real residual0 = 0;
  Real residual1 = 0;
  int iterations = 0;
};

// ---- operations ----

/// w = psi_C^2 (pointwise; nonnegativity is structural).
ProbabilityDensity density_from_wavefunction(const ClassicalWaveFunction& psi);

/// psi_C = s * sqrt(w); s from the rule (+1 at zeros of the reference).
ClassicalWaveFunction wavefunction_from_density(const ProbabilityDensity& w,
                                                const SignRule& rule);

/// Wigner function of a pure state on the (z,p) lattice (conventions doc).
/// Real; unit integral; position marginal equals |psi_Q|^2.
RealPhaseField wigner_of_pure_state(const QuantumWaveFunction& psi);

struct PureStateDensity {
  ProbabilityDensity w;
  ClassicalWaveFunction psi_c;
  Real purity_correction;  // renormalization applied to psi_C, typically ~1e-12
};

/// psi_C = wigner_of_pure_state(psi_Q) (renormalized, correction logged),
/// w = psi_C^2. Throws NormalizationError if the correction exceeds 1e-6.
PureStateDensity pure_state_density(const QuantumWaveFunction& psi);

/// Normalized Gaussian, position mean z0, momentum mean p0, spread sigma.
QuantumWaveFunction gaussian_packet(const GridSpec& g, Real z0, Real p0,
                                    Real sigma);

/// Equal-weight superposition of Gaussians at +-d/2 with common momentum p0.
QuantumWaveFunction double_slit_state(const GridSpec& g, Real separation,
                                      Real sigma, Real p0);

/// Apply H = P^2/(2m) + V to psi spectrally.
CVector apply_hamiltonian(const CVector& psi, const GridSpec& g,
                          const Potential& V);

/// Dense H matrix in the sqrt(dx)-normalized coefficient convention; exact
/// spectral kinetic term. Used for density-matrix traces and test oracles.
CMatrix hamiltonian_matrix(const GridSpec& g, const Potential& V);

struct SpectrumOptions {
  Real tol = 1e-9;
  int max_iterations = 200000;
};

/// Ground and first excited state by imaginary-time propagation with
/// Gram-Schmidt deflation. Throws ConvergenceError past the iteration cap.
SpectrumSlice solve_spectrum(const GridSpec& g, const Potential& V,
                             const SpectrumOptions& opts = {});

}  // namespace zwitter
