#pragma once

#include "zwitter/core.hpp"
#include "zwitter/state.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

// Exactly norm-preserving split-step propagation of psi_C under the
// interpolating generator (substep order and phases: docs/conventions.md),
// the equivalent nonlinear density step, and the two independent oracles:
// a split-step Schrodinger propagator on the x-lattice and a backward-
// characteristics Liouville solver.

namespace zwitter {

enum class SplitScheme { Strang, Yoshida4 };

struct PropagatorConfig {
  Real gamma = 0;  // 0 = quantum, pi/2 = classical
  Real dt = 1e-3;
  SplitScheme scheme = SplitScheme::Strang;
  Real boundary_threshold = 1e-10;

  void validate() const {
    if (!(gamma >= 0 && gamma <= pi / 2))
      throw UsageError("gamma must lie in [0, pi/2]");
    if (!(dt > 0)) throw UsageError("dt must be > 0");
  }
};

/// dt heuristic: largest step with max |Phi_gamma| * dt < 0.5 rad over the
/// central `support_fraction` of the (z, r) lattice. Advisory only.
Real suggest_dt(const GridSpec& g, const Potential& v, Real gamma,
                Real support_fraction = 0.5);

/// Phase-cached propagator for repeated stepping.
class ZwitterPropagator {
 public:
  ZwitterPropagator(const GridSpec& g, Potential v, PropagatorConfig cfg);

  /// Advance one full step of cfg.dt; checks and discards the imaginary
  /// residue (RealityError above 1e-9 relative).
  void step(RealPhaseField& psi_c);
  const PropagatorConfig& config() const { return cfg_; }

 private:
  struct StrangPhases {
    CArray kinetic_half;  // (k,p)
    CArray potential;     // (z,r)
  };
  const StrangPhases& phases_for(Real dt);
  void strang_substep(CArray& buf, const StrangPhases& ph) const;

  GridSpec grid_;
  Potential v_;
  PropagatorConfig cfg_;
  std::map<Real, StrangPhases> cache_;
  CArray buf_;
};

/// One step of the zwitter evolution (builds a propagator; use
/// ZwitterPropagator for loops).
RealPhaseField step_zwitter(const RealPhaseField& psi_c, const Potential& v,
                            const PropagatorConfig& cfg);

struct EvolutionReport {
  std::vector<std::string> observable_names;
  struct Row {
    Real t = 0;
    Real norm = 0;
    Real boundary_mass = 0;
    std::vector<Real> observables;
  };
  std::vector<Row> rows;
  Real max_norm_drift = 0;
};

struct EvolutionObservers {
  int cadence = 1;  // record every `cadence` steps (and at t = 0)
  std::vector<std::pair<std::string,
                        std::function<Real(const RealPhaseField&)>>>
      observables;
  /// When non-empty, write ZWIT snapshots of psi_C here every `cadence`.
  std::string snapshot_dir;
};

/// Repeated stepping with diagnostics. T/dt must be integral within 1e-9.
std::pair<RealPhaseField, EvolutionReport> evolve(
    const RealPhaseField& psi_c, const Potential& v,
    const PropagatorConfig& cfg, Real t_final,
    const EvolutionObservers& observers = {});

/// The nonlinear density step, computed by conjugation with the square root
/// lift: sqrt -> step_zwitter -> square. Positivity and normalization are
/// structural.
ProbabilityDensity step_density(const ProbabilityDensity& w, const Potential& v,
                                const PropagatorConfig& cfg,
                                const SignRule& rule);

// ---- Schrodinger oracle ----

class SchrodingerPropagator {
 public:
  SchrodingerPropagator(const GridSpec& g, Potential v, Real dt);
  void step(QuantumWaveFunction& psi);

 private:
  GridSpec grid_;
  Potential v_;
  Real dt_;
  CVector kinetic_half_;
  CVector potential_;
};

QuantumWaveFunction schrodinger_step(const QuantumWaveFunction& psi,
                                     const Potential& v, Real dt);
QuantumWaveFunction schrodinger_evolve(const QuantumWaveFunction& psi,
                                       const Potential& v, Real dt,
                                       Real t_final);

// ---- Liouville oracle ----

struct LiouvilleResult {
  RealPhaseField w;
  Real renormalization;  // factor applied to restore unit mass
};

/// Backward characteristics: integrate Hamilton's equations from every node
/// for time -T with a symplectic leapfrog and sample w0 at the preimage via
/// periodic bicubic interpolation.
LiouvilleResult liouville_characteristics(const RealPhaseField& w0,
                                          const Potential& v, Real t_final,
                                          int substeps);

}  // namespace zwitter
