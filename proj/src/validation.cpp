#include "zwitter/validation.hpp"

#include "zwitter/evolution.hpp"
#include "zwitter/experiments.hpp"
#include "zwitter/observables.hpp"
#include "zwitter/spectral.hpp"
#include "zwitter/transforms.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace zwitter::validation {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(Real v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Check {
  bool pass = true;
  std::string details;

  void require(bool ok, const std::string& what) {
    if (!details.empty()) details += "; ";
    details += what + (ok ? " [ok]" : " [FAIL]");
    pass = pass && ok;
  }
};

// ---- shared configurations ----

GridSpec acceptance_grid_256() { return make_wigner_grid(256, 256, 16.0); }
GridSpec grid_128() { return make_wigner_grid(128, 128, 12.0); }
GridSpec spectro_grid() { return make_wigner_grid(80, 80, 10.0); }
GridSpec spectro_grid_fine() { return make_wigner_grid(160, 160, 10.0); }

Potential acceptance_quartic() { return Potential::quartic(1.0, 0.1); }

RealPhaseField packet_psi_c(const GridSpec& g, Real z0, Real p0, Real sigma) {
  return pure_state_density(gaussian_packet(g, z0, p0, sigma)).psi_c.field;
}

GroundStateConfig spectro_config(const GridSpec& g, const Potential& v) {
  GroundStateConfig cfg;
  cfg.grid = g;
  cfg.potential = v;
  return cfg;
}

DoubleSlitConfig slit_config(int n, Real dt) {
  DoubleSlitConfig cfg;
  cfg.grid = make_wigner_grid(n, n, 40.0);
  cfg.dt = dt;
  return cfg;
}

Real max_abs_diff(const Array& a, const Array& b) {
  return (a - b).abs().maxCoeff();
}

Real l1_distance(const RealPhaseField& a, const RealPhaseField& b) {
  return (a.values - b.values).abs().sum() * a.grid.cell_measure();
}

// ---- criteria ----

// Quantum limit: the gamma = 0 lane against the Schrodinger oracle.
Check criterion_quantum_limit() {
  Check c;
  for (const bool harmonic : {false, true}) {
    const GridSpec g = acceptance_grid_256();
    const Potential v =
        harmonic ? Potential::harmonic(1.0) : acceptance_quartic();
    const QuantumWaveFunction psi_q =
        gaussian_packet(g, 1.5, 0.0, 1.0 / std::sqrt(2.0));
    RealPhaseField psi_c = pure_state_density(psi_q).psi_c.field;

    PropagatorConfig pc;
    pc.gamma = 0;
    pc.dt = 1e-3;
    ZwitterPropagator prop(g, v, pc);
    const long steps = std::lround(5.0 / pc.dt);
    for (long s = 0; s < steps; ++s) prop.step(psi_c);
    const RealPhaseField rho_w = quantum_transform(psi_c);

    const QuantumWaveFunction evolved =
        schrodinger_evolve(psi_q, v, pc.dt, 5.0);
    const RealPhaseField oracle = wigner_of_pure_state(evolved);

    const Real diff = max_abs_diff(rho_w.values, oracle.values);
    const Real tol = harmonic ? 1e-6 : 1e-4;
    c.require(diff < tol, std::string(harmonic ? "harmonic" : "quartic") +
                              " max|rho_w - Wigner(oracle)| = " + fmt(diff) +
                              " < " + fmt(tol));
  }
  return c;
}

// Classical limit: gamma = pi/2 against backward characteristics.
Check criterion_classical_limit() {
  Check c;
  for (const bool harmonic : {false, true}) {
    const GridSpec g = acceptance_grid_256();
    const Potential v =
        harmonic ? Potential::harmonic(1.0) : acceptance_quartic();
    RealPhaseField psi_c = packet_psi_c(g, 1.5, 0.0, 1.0 / std::sqrt(2.0));
    const RealPhaseField w0{g, psi_c.values.square()};

    PropagatorConfig pc;
    pc.gamma = pi / 2;
    pc.dt = 1e-3;
    ZwitterPropagator prop(g, v, pc);
    const long steps = std::lround(5.0 / pc.dt);
    for (long s = 0; s < steps; ++s) prop.step(psi_c);
    const RealPhaseField w{g, psi_c.values.square()};

    const LiouvilleResult oracle = liouville_characteristics(w0, v, 5.0, 5000);
    const Real l1 = l1_distance(w, oracle.w);
    const Real tol = harmonic ? 1e-4 : 5e-3;
    c.require(l1 < tol, std::string(harmonic ? "harmonic" : "quartic") +
                            " L1(w, characteristics) = " + fmt(l1) + " < " +
                            fmt(tol));
  }
  return c;
}

// Structural conservation over 1e4 steps at three gammas.
Check criterion_structural() {
  Check c;
  const GridSpec g = grid_128();
  const Potential v = acceptance_quartic();
  for (const Real gamma : {0.0, 0.3, pi / 2}) {
    RealPhaseField psi_c = packet_psi_c(g, 1.5, 0.0, 1.0 / std::sqrt(2.0));
    PropagatorConfig pc;
    pc.gamma = gamma;
    pc.dt = 1e-3;
    ZwitterPropagator prop(g, v, pc);
    Real max_drift = 0;
    Real min_w = 0;
    for (int s = 1; s <= 10000; ++s) {
      prop.step(psi_c);
      if (s % 100 == 0 || s == 10000) {
        max_drift = std::max(max_drift, std::abs(norm(psi_c) - 1.0));
        min_w = std::min(min_w, psi_c.values.square().minCoeff());
      }
    }
    const Real mass =
        integrate_phase_space({g, psi_c.values.square()});
    c.require(max_drift < 1e-10, "gamma=" + fmt(gamma) + " |norm-1| = " +
                                     fmt(max_drift) + " < 1e-10");
    c.require(min_w >= 0, "gamma=" + fmt(gamma) + " w >= 0 exactly");
    c.require(std::abs(mass - 1) < 1e-9, "gamma=" + fmt(gamma) +
                                             " |int w - 1| = " +
                                             fmt(std::abs(mass - 1)) +
                                             " < 1e-9");
  }
  return c;
}

// Operator identities: commutator, roughness, moment-path equivalence.
Check criterion_identities() {
  Check c;
  const GridSpec g = make_wigner_grid(64, 64, 14.0);

  // Canonical commutator on 20 random localized band-limited fields.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<Real> center(-2.5, 2.5), width(0.5, 0.9),
      amp(-1.0, 1.0);
  Real worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Array f = Array::Zero(g.n_z, g.n_p);
    for (int term = 0; term < 6; ++term) {
      const Real z0 = center(rng), p0 = center(rng), s = width(rng),
                 a = amp(rng);
      for (int j = 0; j < g.n_z; ++j)
        for (int b = 0; b < g.n_p; ++b) {
          const Real dz = g.z(j) - z0, dp = g.p(b) - p0;
          f(j, b) += a * std::exp(-(dz * dz + dp * dp) / (2 * s * s));
        }
    }
    f /= f.abs().maxCoeff();
    const RealPhaseField field{g, f};
    const CArray xf = apply_xq(field).values;
    const CArray pf = apply_pq(field).values;
    const CArray xp = apply_xq({g, Representation::ZP, pf}).values;
    const CArray px = apply_pq({g, Representation::ZP, xf}).values;
    const CArray resid =
        xp - px - Complex(0, g.hbar) * f.cast<Complex>();
    worst = std::max(worst, resid.abs().maxCoeff());
  }
  c.require(worst < 1e-10,
            "max commutator residual over 20 fields = " + fmt(worst));

  // Roughness identity on the zoo plus the analytic harmonic case.
  const auto zoo = test_state_zoo(g, true);
  const QuantumOperatorExpr pq2 =
      QuantumOperatorExpr::mul(QuantumOperatorExpr::pq(),
                               QuantumOperatorExpr::pq());
  Real worst_rough = 0;
  for (const auto& psi_c : zoo) {
    const ProbabilityDensity w =
        ProbabilityDensity::unchecked({g, psi_c.values.square()});
    const auto dec = momentum_roughness_decomposition(w);
    const Real op_side = quantum_expectation(psi_c, pq2);
    worst_rough = std::max(worst_rough, std::abs(dec.total - op_side));
  }
  c.require(worst_rough < 1e-6,
            "max |roughness total - <P_Q^2>| over " +
                std::to_string(zoo.size()) + " states = " + fmt(worst_rough));

  const auto ground = packet_psi_c(g, 0, 0, 1.0 / std::sqrt(2.0));
  const auto dec = momentum_roughness_decomposition(
      ProbabilityDensity::unchecked({g, ground.values.square()}));
  c.require(std::abs(dec.p_cl_sq - 0.25) < 1e-6 &&
                std::abs(dec.roughness - 0.25) < 1e-6 &&
                std::abs(dec.total - 0.5) < 1e-6,
            "harmonic ground decomposition = (" + fmt(dec.p_cl_sq) + ", " +
                fmt(dec.roughness) + ", " + fmt(dec.total) + ")");

  // Moment path equivalence for every monomial of total degree <= 4.
  Real worst_path = 0;
  for (const auto& psi_c : zoo) {
    const RealPhaseField rho_w = quantum_transform(psi_c);
    for (int zp = 0; zp <= 4; ++zp)
      for (int pp = 0; zp + pp <= 4; ++pp) {
        if (zp + pp == 0) continue;
        const ClassicalObservable f{
            [zp, pp](Real z, Real p) {
              return std::pow(z, zp) * std::pow(p, pp);
            },
            "z^i p^j"};
        const Real moment = symmetrized_moment(rho_w, f);
        const Real op = quantum_expectation(
            psi_c, QuantumOperatorExpr::symmetrized_monomial(zp, pp));
        worst_path = std::max(worst_path, std::abs(moment - op));
      }
  }
  c.require(worst_path < 1e-8,
            "max |moment - symmetrized operator| = " + fmt(worst_path));
  return c;
}

// Transform equivalence: factorized form vs density-matrix pipeline, and the
// quadruple-sum oracle on a 12x12 grid.
Check criterion_transforms() {
  Check c;
  const GridSpec g = make_wigner_grid(64, 64, 14.0);
  const auto zoo = test_state_zoo(g, true);
  Real worst = 0;
  for (const auto& psi_c : zoo) {
    const RealPhaseField direct = quantum_transform(psi_c);
    const RealPhaseField piped = quantum_transform_via_density_matrix(psi_c);
    worst = std::max(worst, max_abs_diff(direct.values, piped.values));
  }
  c.require(worst < 1e-9, "max pipeline disagreement over " +
                              std::to_string(zoo.size()) +
                              " states = " + fmt(worst));

  // Brute force on a tiny grid. Same lattice conventions, quadruple loop.
  const GridSpec tiny = make_wigner_grid(12, 12, 6.0);
  RealPhaseField psi = packet_psi_c(tiny, 0.3, -0.4, 0.8);
  const RealPhaseField fast = quantum_transform(psi);

  const int n = tiny.n_z;
  CArray half = psi.values.cast<Complex>();
  spectral::half_shift_z_inplace(half, tiny, +1);
  auto psi_at = [&](int half_units, int b) {
    // value of psi_C at z-lattice point (half_units * dz/2) relative to j=0
    const int hu = ((half_units % (2 * n)) + 2 * n) % (2 * n);
    return (hu % 2 == 0) ? Complex(psi.values(hu / 2, b), 0)
                         : half((hu - 1) / 2, b);
  };
  Real worst_oracle = 0;
  const Real measure = tiny.dz() * tiny.dz() *
                       std::pow(tiny.dp() / (2 * pi * tiny.hbar), 2);
  for (int j = 0; j < n; ++j) {
    for (int a = 0; a < n; ++a) {
      Real acc = 0;
      for (int cr = 0; cr < 2 * n; ++cr) {
        const Real r = (cr - n) * tiny.dz();
        for (int cr2 = 0; cr2 < 2 * n; ++cr2) {
          const Real r2 = (cr2 - n) * tiny.dz();
          for (int b = 0; b < n; ++b) {
            const Real s = tiny.p(b) - tiny.p(a);
            const Complex f1 = psi_at(2 * j + (cr - n), b);
            for (int b2 = 0; b2 < n; ++b2) {
              const Real s2 = tiny.p(b2) - tiny.p(a);
              const Complex f2 = psi_at(2 * j + (cr2 - n), b2);
              acc += (f1 * f2).real() *
                     std::cos((s2 * r - s * r2) / tiny.hbar);
            }
          }
        }
      }
      worst_oracle =
          std::max(worst_oracle, std::abs(acc * measure - fast.values(j, a)));
    }
  }
  c.require(worst_oracle < 1e-8,
            "max |quadruple sum - spectral| on 12x12 = " + fmt(worst_oracle));
  return c;
}

// Pure-state round trip through the coarse-graining chain.
Check criterion_pure_state() {
  Check c;
  const GridSpec g = make_wigner_grid(96, 96, 14.0);
  struct Case {
    const char* name;
    QuantumWaveFunction psi;
  };
  const std::vector<Case> cases = {
      {"gaussian", gaussian_packet(g, 0, 0, 1.0 / std::sqrt(2.0))},
      {"coherent", gaussian_packet(g, 1.0, 1.0, 1.0 / std::sqrt(2.0))},
      {"double_slit", double_slit_state(g, 3.0, 0.5, 0.0)},
  };
  for (const auto& [name, psi_q] : cases) {
    const PureStateDensity ps = pure_state_density(psi_q);
    const CoarseDensityMatrix rho =
        coarse_grain(to_xy_representation(ps.psi_c.field));
    const CMatrix rho_op = rho.rho * rho.dx;
    CVector coeff = psi_q.values * std::sqrt(g.dz());
    const Real fidelity = (coeff.adjoint() * rho_op * coeff)(0, 0).real();
    const Real purity = rho.purity();
    c.require(fidelity > 1 - 1e-8, std::string(name) + " fidelity = " +
                                       std::to_string(fidelity));
    c.require(std::abs(purity - 1) < 1e-8,
              std::string(name) + " purity = " + std::to_string(purity));
  }
  return c;
}

// Energy conservation signature: gamma = 0 conserves <H_Q>, zwitters do not.
Check criterion_energy() {
  Check c;
  const GridSpec g = grid_128();
  const Potential v = acceptance_quartic();
  const QuantumOperatorExpr hq = QuantumOperatorExpr::hq(v);

  auto drift_for = [&](Real gamma) {
    RealPhaseField psi_c = packet_psi_c(g, 1.5, 0.0, 1.0 / std::sqrt(2.0));
    PropagatorConfig pc;
    pc.gamma = gamma;
    pc.dt = 1e-3;
    pc.scheme = SplitScheme::Yoshida4;
    ZwitterPropagator prop(g, v, pc);
    Real emin = std::numeric_limits<Real>::max(), emax = -emin;
    const long steps = std::lround(10.0 / pc.dt);
    for (long s = 0; s <= steps; ++s) {
      if (s % 20 == 0) {
        const Real e = quantum_expectation(psi_c, hq);
        emin = std::min(emin, e);
        emax = std::max(emax, e);
      }
      if (s < steps) prop.step(psi_c);
    }
    return emax - emin;
  };

  const Real d0 = drift_for(0.0);
  const Real d3 = drift_for(0.3);
  c.require(d0 < 1e-8, "gamma=0 <H_Q> drift = " + fmt(d0) + " < 1e-8");
  c.require(d3 > 100 * d0, "gamma=0.3 drift = " + fmt(d3) + " > 100x " +
                               fmt(d0));
  return c;
}

// Spectroscopy scaling (shared with criterion 10 via defaults).
Check criterion_spectroscopy() {
  Check c;
  const GroundStateConfig cfg =
      spectro_config(spectro_grid(), acceptance_quartic());
  const std::vector<Real> gammas = {0.0, 0.05, 0.1, 0.15, 0.2, 0.3};
  const GammaScanResult scan = scan_gamma(cfg, gammas);

  c.require(std::abs(scan.de_fit.slope - 1.0) <= 0.1,
            "log dE vs log sin^2 slope = " + fmt(scan.de_fit.slope));
  c.require(scan.de_fit.r_squared > 0.99,
            "R^2 = " + std::to_string(scan.de_fit.r_squared));
  for (const auto& r : scan.rows) {
    if (r.gamma == 0) {
      c.require(r.delta_e < 1e-7 && std::abs(r.shift_e) < 1e-7,
                "gamma=0 dE = " + fmt(r.delta_e) + ", shift = " +
                    fmt(r.shift_e));
    } else {
      c.require(r.shift_e / r.delta_e < 0.25,
                "gamma=" + fmt(r.gamma) + " shift/dE = " +
                    fmt(r.shift_e / r.delta_e) + " < 0.25");
    }
  }

  const GroundStateConfig harmonic_cfg =
      spectro_config(spectro_grid(), Potential::harmonic(1.0));
  for (const Real gamma : {0.05, 0.15, 0.3}) {
    const auto r = zwitter_ground_state(harmonic_cfg, gamma).result;
    c.require(r.delta_e < 1e-7, "harmonic gamma=" + fmt(gamma) + " dE = " +
                                    fmt(r.delta_e) + " < 1e-7");
  }
  return c;
}

// Double slit: oracle match, fringe kinematics, visibility ordering.
Check criterion_double_slit() {
  Check c;
  const DoubleSlitConfig cfg = slit_config(288, 2e-3);
  const DoubleSlitResult res = run_double_slit(cfg);

  const Real vis0 = res.profiles.front().visibility;
  const Real vis_oracle = res.oracle.visibility;
  c.require(std::abs(vis0 - vis_oracle) <= 0.02 * vis_oracle,
            "gamma=0 visibility " + fmt(vis0) + " vs oracle " +
                fmt(vis_oracle));
  c.require(std::abs(res.fringe_spacing_measured -
                     res.fringe_spacing_expected) <= cfg.grid.dz(),
            "fringe spacing " + fmt(res.fringe_spacing_measured) +
                " vs 2 pi hbar T/(m d) = " + fmt(res.fringe_spacing_expected) +
                " within one cell");
  const Real vis_pi2 = res.profiles.back().visibility;
  c.require(vis_pi2 < vis0, "visibility(pi/2) = " + fmt(vis_pi2) +
                                " < visibility(0) = " + fmt(vis0));
  bool monotone = true;
  for (size_t i = 1; i < res.profiles.size(); ++i)
    monotone = monotone && res.profiles[i].visibility <=
                               res.profiles[i - 1].visibility + 0.01 * vis0;
  c.require(monotone, "visibility nonincreasing across the gamma grid");
  return c;
}

// Self-convergence of every derived reported number.
Check criterion_convergence() {
  Check c;

  // Spectroscopy dE values.
  const GroundStateConfig coarse =
      spectro_config(spectro_grid(), acceptance_quartic());
  GroundStateConfig fine = spectro_config(spectro_grid_fine(), acceptance_quartic());
  fine.dt = coarse.dt / 2;
  for (const Real gamma : {0.05, 0.1, 0.15, 0.2, 0.3}) {
    const Real de_c = zwitter_ground_state(coarse, gamma).result.delta_e;
    const Real de_f = zwitter_ground_state(fine, gamma).result.delta_e;
    const Real rel = std::abs(de_f - de_c) / de_f;
    c.require(rel <= 0.02, "dE(gamma=" + fmt(gamma) + ") rel change " +
                               fmt(rel) + " <= 2%");
  }

  // Double-slit visibilities.
  const DoubleSlitResult slit_c = run_double_slit(slit_config(288, 2e-3));
  const DoubleSlitResult slit_f = run_double_slit(slit_config(576, 1e-3));
  for (size_t i = 0; i < slit_c.profiles.size(); ++i) {
    const Real rel = std::abs(slit_f.profiles[i].visibility -
                              slit_c.profiles[i].visibility) /
                     slit_f.profiles[i].visibility;
    c.require(rel <= 0.02,
              "visibility(gamma=" + fmt(slit_c.profiles[i].gamma) +
                  ") rel change " + fmt(rel) + " <= 2%");
  }

  // Double-well ratio.
  DoubleWellConfig dw;
  dw.base = spectro_config(spectro_grid(), Potential::double_well(1.0, 4.0));
  DoubleWellConfig dwf = dw;
  dwf.base.grid = spectro_grid_fine();
  dwf.base.dt = dw.base.dt / 2;
  const DoubleWellReport rep_c = run_double_well_proximity(dw);
  const DoubleWellReport rep_f = run_double_well_proximity(dwf);
  for (size_t i = 0; i < rep_c.ratios.size(); ++i) {
    const Real rel = std::abs(rep_f.ratios[i] - rep_c.ratios[i]) /
                     std::max(1e-300, rep_f.ratios[i]);
    c.require(rel <= 0.02, "double-well ratio(gamma=" + fmt(dw.gammas[i]) +
                               ") rel change " + fmt(rel) + " <= 2%");
  }
  return c;
}

struct Criterion {
  const char* name;
  Check (*fn)();
};

const Criterion kCriteria[10] = {
    {"quantum-limit equivalence (gamma=0 vs Schrodinger oracle)",
     criterion_quantum_limit},
    {"classical-limit equivalence (gamma=pi/2 vs Liouville oracle)",
     criterion_classical_limit},
    {"structural conservation over 1e4 steps", criterion_structural},
    {"operator identities (commutator, roughness, moment paths)",
     criterion_identities},
    {"transform equivalence (factorized vs pipeline vs brute force)",
     criterion_transforms},
    {"pure-state round trip (fidelity and purity)", criterion_pure_state},
    {"energy non-conservation signature", criterion_energy},
    {"zwitter spectroscopy scaling", criterion_spectroscopy},
    {"double-slit interference vs gamma", criterion_double_slit},
    {"self-convergence of derived numbers", criterion_convergence},
};

}  // namespace

std::vector<RealPhaseField> test_state_zoo(const GridSpec& g,
                                           bool include_evolved) {
  std::vector<RealPhaseField> zoo;
  const Real s0 = 1.0 / std::sqrt(2.0);
  zoo.push_back(packet_psi_c(g, 0, 0, s0));
  zoo.push_back(packet_psi_c(g, 1.0, 1.0, s0));
  zoo.push_back(packet_psi_c(g, -0.8, 0.5, 0.55));
  zoo.push_back(pure_state_density(double_slit_state(g, 3.0, 0.5, 0.0))
                    .psi_c.field);
  {
    SpectrumOptions opts;
    opts.tol = 1e-9;
    const SpectrumSlice s = solve_spectrum(g, Potential::harmonic(1.0), opts);
    zoo.push_back(pure_state_density(s.psi1).psi_c.field);
  }
  if (include_evolved) {
    const Potential v = acceptance_quartic();
    for (const Real gamma : {0.0, 0.3, pi / 2}) {
      RealPhaseField psi_c = packet_psi_c(g, 1.0, 0.5, s0);
      PropagatorConfig pc;
      pc.gamma = gamma;
      pc.dt = 2e-3;
      ZwitterPropagator prop(g, v, pc);
      for (int s = 0; s < 500; ++s) prop.step(psi_c);
      zoo.push_back(std::move(psi_c));
    }
  }
  return zoo;
}

CriterionResult run_criterion(int id) {
  if (id < 1 || id > 10) throw UsageError("criterion id must be in 1..10");
  CriterionResult out;
  out.id = id;
  out.name = kCriteria[id - 1].name;
  const auto start = Clock::now();
  try {
    Check c = kCriteria[id - 1].fn();
    out.pass = c.pass;
    out.details = c.details;
  } catch (const std::exception& e) {
    out.pass = false;
    out.details = std::string("exception: ") + e.what();
  }
  out.seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

std::vector<int> selector_criteria(const std::string& selector) {
  if (selector == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  if (selector == "identities") return {4, 5, 6};
  if (selector == "oracles") return {1, 2};
  if (selector == "structural") return {3};
  if (selector == "transforms") return {5};
  if (selector == "purestate") return {6};
  if (selector == "energy") return {7};
  if (selector == "spectroscopy") return {8};
  if (selector == "doubleslit") return {9};
  if (selector == "convergence") return {10};
  throw UsageError("unknown validation selector: " + selector);
}

bool Verdict::all_pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

std::string Verdict::to_json() const {
  nlohmann::json j;
  j["pass"] = all_pass();
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : criteria) {
    nlohmann::json e;
    e["id"] = c.id;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["details"] = c.details;
    e["seconds"] = c.seconds;
    j["criteria"].push_back(e);
  }
  return j.dump(2);
}

Verdict run(const std::vector<int>& ids, bool print) {
  Verdict v;
  for (int id : ids) {
    CriterionResult r = run_criterion(id);
    if (print)
      std::printf("[%s] criterion %d: %s (%.1fs)\n    %s\n",
                  r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                  r.details.c_str());
    v.criteria.push_back(std::move(r));
  }
  return v;
}

}  // namespace zwitter::validation
