#pragma once

#include "zwitter/core.hpp"
#include "zwitter/state.hpp"
#include "zwitter/transforms.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

// Classical and quantum observables. Quantum operators act spectrally:
// X_Q multiplies by (z - r/2) in (z,r), P_Q by (p + hbar k/2) in (k,p)
// (docs/conventions.md), which makes the canonical commutator hold to
// rounding rather than to a finite-difference error.

namespace zwitter {

struct ClassicalObservable {
  std::function<Real(Real, Real)> f;  // F(z, p)
  std::string description;
};

Real classical_expectation(const ProbabilityDensity& w,
                           const ClassicalObservable& f);
Real classical_expectation(const RealPhaseField& w,
                           const ClassicalObservable& f);

/// Apply X_Q / P_Q to a phase-space field; result back in (z,p).
ComplexPhaseField apply_xq(const ComplexPhaseField& f);
ComplexPhaseField apply_pq(const ComplexPhaseField& f);
ComplexPhaseField apply_xq(const RealPhaseField& f);
ComplexPhaseField apply_pq(const RealPhaseField& f);

/// Expression tree over the generators {X_Q, P_Q} with nodes
/// {scale, add, mul (ordered), sym (total symmetrization), V(X_Q), H_Q(V)}.
/// Serializes to a prefix text form, e.g. "sym(mul(XQ,PQ))",
/// "HQ(quartic 1.0 0.1)" (grammar: docs/operators.md).
class QuantumOperatorExpr {
 public:
  static QuantumOperatorExpr xq();
  static QuantumOperatorExpr pq();
  static QuantumOperatorExpr scale(Real c, QuantumOperatorExpr e);
  static QuantumOperatorExpr add(QuantumOperatorExpr a, QuantumOperatorExpr b);
  static QuantumOperatorExpr mul(QuantumOperatorExpr a, QuantumOperatorExpr b);
  static QuantumOperatorExpr sym(std::vector<QuantumOperatorExpr> factors);
  static QuantumOperatorExpr potential_of_xq(Potential v);
  static QuantumOperatorExpr hq(Potential v);
  /// Monomial sym(X_Q^i P_Q^j) matching the moment of z^i p^j.
  static QuantumOperatorExpr symmetrized_monomial(int zpow, int ppow);

  static QuantumOperatorExpr parse(const std::string& text);
  std::string str() const;
  bool hermitian() const;
  /// Flattened factor list when this is a chain of ordered products;
  /// otherwise a single-element list holding the expression itself.
  std::vector<QuantumOperatorExpr> mul_chain_factors() const;

  CArray apply(const CArray& field, const GridSpec& g) const;
  /// Dense matrix on the x-lattice, sqrt(dx)-normalized coefficients.
  CMatrix matrix(const GridSpec& g) const;

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit QuantumOperatorExpr(std::shared_ptr<const Node> n)
      : node_(std::move(n)) {}
};

/// <psi_C | expr | psi_C> with the phase-space measure. For Hermitian
/// expressions an imaginary residue above 1e-9 throws HermiticityError;
/// non-Hermitian expressions report their real part.
Real quantum_expectation(const ClassicalWaveFunction& psi_c,
                         const QuantumOperatorExpr& expr);
Real quantum_expectation(const RealPhaseField& psi_c,
                         const QuantumOperatorExpr& expr);
/// Complex-valued variant (no hermiticity policing).
Complex quantum_expectation_complex(const RealPhaseField& psi_c,
                                    const QuantumOperatorExpr& expr);

/// Moment of F against a quasi-probability field: integral of F * rho_w.
Real symmetrized_moment(const RealPhaseField& rho_w,
                        const ClassicalObservable& f);

struct RoughnessDecomposition {
  Real p_cl_sq = 0;    // <p^2> against w
  Real roughness = 0;  // (hbar^2/16) * integral (d_z w)^2 / w
  Real total = 0;
  Real excluded_mass = 0;  // mass below the regularization floor
};

/// <P_Q^2> = <P_cl^2> + (hbar^2/16) <(d_z ln w)^2>, evaluated from w alone.
/// Cells with w < 1e-13 * max(w) are excluded and their mass reported.
RoughnessDecomposition momentum_roughness_decomposition(
    const ProbabilityDensity& w);

/// (1/2) < {A, B} >; symmetric in A and B by construction.
Real anticommutator_correlation(const RealPhaseField& psi_c,
                                const QuantumOperatorExpr& a,
                                const QuantumOperatorExpr& b);

/// Disjoint half-open intervals covering the x-domain with representative
/// values A_alpha.
struct BinningScheme {
  std::vector<Real> edges;           // size n_bins + 1, ascending
  std::vector<Real> representatives; // size n_bins

  static BinningScheme uniform(const GridSpec& g, int n_bins);
  int n_bins() const { return int(representatives.size()); }
};

struct SequentialCorrelation {
  Real value = 0;
  std::vector<Real> bin_probabilities;  // w_alpha
  std::vector<int> empty_bins;          // bins with w_alpha < 1e-12
};

/// Conditional (two-measurement) correlation: first a sharp binned position
/// measurement with values A_alpha, then the expectation of B in the
/// collapsed branch: sum_alpha A_alpha Tr(Pi_alpha rho Pi_alpha B).
SequentialCorrelation sequential_measurement_correlation(
    const CoarseDensityMatrix& rho, const BinningScheme& binning,
    const QuantumOperatorExpr& b);

}  // namespace zwitter
