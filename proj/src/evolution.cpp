#include "zwitter/evolution.hpp"

#include "zwitter/io.hpp"
#include "zwitter/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace zwitter {

namespace {

Real phi_gamma(const GridSpec& g, const Potential& v, Real gamma, Real z,
               Real r) {
  const Real c2 = std::cos(gamma) * std::cos(gamma);
  const Real s2 = std::sin(gamma) * std::sin(gamma);
  const Real moyal = (v(z - r / 2) - v(z + r / 2)) / g.hbar;
  const Real classical = -v.deriv(z) * r / g.hbar;
  return c2 * moyal + s2 * classical;
}

}  // namespace

Real suggest_dt(const GridSpec& g, const Potential& v, Real gamma,
                Real support_fraction) {
  Real max_phi = 0;
  const int jlo = int(g.n_z * (0.5 - support_fraction / 2));
  const int jhi = int(g.n_z * (0.5 + support_fraction / 2));
  const int clo = int(g.n_p * (0.5 - support_fraction / 2));
  const int chi = int(g.n_p * (0.5 + support_fraction / 2));
  for (int j = jlo; j < jhi; ++j)
    for (int c = clo; c < chi; ++c)
      max_phi = std::max(max_phi,
                         std::abs(phi_gamma(g, v, gamma, g.z(j), g.r(c))));
  // Also bound the kinetic shear phase over the same window.
  const Real kmax = std::abs(g.k(jlo));
  const Real pmax = std::abs(g.p(clo));
  max_phi = std::max(max_phi, kmax * pmax / g.mass);
  if (max_phi <= 0) return 1e-2;
  return 0.5 / max_phi;
}

ZwitterPropagator::ZwitterPropagator(const GridSpec& g, Potential v,
                                     PropagatorConfig cfg)
    : grid_(g), v_(std::move(v)), cfg_(cfg) {
  cfg_.validate();
  buf_.resize(g.n_z, g.n_p);
}

const ZwitterPropagator::StrangPhases& ZwitterPropagator::phases_for(Real dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  StrangPhases ph;
  ph.kinetic_half.resize(grid_.n_z, grid_.n_p);
  ph.potential.resize(grid_.n_z, grid_.n_p);
  for (int l = 0; l < grid_.n_z; ++l)
    for (int a = 0; a < grid_.n_p; ++a)
      ph.kinetic_half(l, a) = std::polar(
          1.0, -0.5 * dt * grid_.k(l) * grid_.p(a) / grid_.mass);
  for (int j = 0; j < grid_.n_z; ++j)
    for (int c = 0; c < grid_.n_p; ++c)
      ph.potential(j, c) = std::polar(
          1.0, -dt * phi_gamma(grid_, v_, cfg_.gamma, grid_.z(j), grid_.r(c)));
  return cache_.emplace(dt, std::move(ph)).first->second;
}

void ZwitterPropagator::strang_substep(CArray& buf,
                                       const StrangPhases& ph) const {
  spectral::z_to_k_inplace(buf, grid_);
  buf *= ph.kinetic_half;
  spectral::k_to_z_inplace(buf, grid_);
  spectral::p_to_r_inplace(buf, grid_);
  buf *= ph.potential;
  spectral::r_to_p_inplace(buf, grid_);
  spectral::z_to_k_inplace(buf, grid_);
  buf *= ph.kinetic_half;
  spectral::k_to_z_inplace(buf, grid_);
}

void ZwitterPropagator::step(RealPhaseField& psi_c) {
  require_same_grid(psi_c.grid, grid_, "ZwitterPropagator::step");
  buf_ = psi_c.values.cast<Complex>();
  if (cfg_.scheme == SplitScheme::Strang) {
    strang_substep(buf_, phases_for(cfg_.dt));
  } else {
    static const Real w1 = 1.0 / (2.0 - std::cbrt(2.0));
    static const Real w0 = 1.0 - 2.0 * w1;
    const StrangPhases& outer = phases_for(w1 * cfg_.dt);
    const StrangPhases& inner = phases_for(w0 * cfg_.dt);
    strang_substep(buf_, outer);
    strang_substep(buf_, inner);
    strang_substep(buf_, outer);
  }
  const Real scale = buf_.abs().maxCoeff();
  const Real residue = buf_.imag().abs().maxCoeff();
  if (scale > 0 && residue > 1e-9 * scale)
    throw RealityError("step_zwitter: imaginary residue " +
                       std::to_string(residue / scale) +
                       " (transform convention bug?)");
  psi_c.values = buf_.real();
}

RealPhaseField step_zwitter(const RealPhaseField& psi_c, const Potential& v,
                            const PropagatorConfig& cfg) {
  ZwitterPropagator prop(psi_c.grid, v, cfg);
  RealPhaseField out = psi_c;
  prop.step(out);
  return out;
}

std::pair<RealPhaseField, EvolutionReport> evolve(
    const RealPhaseField& psi_c, const Potential& v,
    const PropagatorConfig& cfg, Real t_final,
    const EvolutionObservers& observers) {
  cfg.validate();
  if (t_final < 0) throw UsageError("evolve: T must be >= 0");
  const Real steps_real = t_final / cfg.dt;
  const long n_steps = std::lround(steps_real);
  if (std::abs(steps_real - Real(n_steps)) > 1e-9 * std::max(1.0, steps_real))
    throw UsageError("evolve: T/dt must be integral");

  ZwitterPropagator prop(psi_c.grid, v, cfg);
  RealPhaseField state = psi_c;

  EvolutionReport report;
  for (const auto& [name, fn] : observers.observables)
    report.observable_names.push_back(name);

  const Real norm0 = norm(state);
  int snapshot_index = 0;
  auto record = [&](Real t) {
    EvolutionReport::Row row;
    row.t = t;
    row.norm = norm(state);
    row.boundary_mass =
        boundary_mass({state.grid, state.values.square()});
    if (row.boundary_mass > cfg.boundary_threshold)
      throw BoundaryMassError("evolve: boundary mass " +
                              std::to_string(row.boundary_mass) + " at t = " +
                              std::to_string(t));
    for (const auto& [name, fn] : observers.observables)
      row.observables.push_back(fn(state));
    report.max_norm_drift =
        std::max(report.max_norm_drift, std::abs(row.norm - norm0));
    report.rows.push_back(std::move(row));
    if (!observers.snapshot_dir.empty()) {
      io::write_zwit(std::filesystem::path(observers.snapshot_dir) /
                         ("psi_c_" + std::to_string(snapshot_index) + ".zwit"),
                     io::snapshot_of(state));
      ++snapshot_index;
    }
  };

  record(0.0);
  const int cadence = std::max(1, observers.cadence);
  for (long s = 1; s <= n_steps; ++s) {
    prop.step(state);
    if (s % cadence == 0 || s == n_steps) record(s * cfg.dt);
  }
  return {std::move(state), std::move(report)};
}

ProbabilityDensity step_density(const ProbabilityDensity& w, const Potential& v,
                                const PropagatorConfig& cfg,
                                const SignRule& rule) {
  ClassicalWaveFunction psi = wavefunction_from_density(w, rule);
  RealPhaseField stepped = step_zwitter(psi.field, v, cfg);
  return density_from_wavefunction({stepped, psi.sign_provenance});
}

// ---- Schrodinger oracle ----

SchrodingerPropagator::SchrodingerPropagator(const GridSpec& g, Potential v,
                                             Real dt)
    : grid_(g), v_(std::move(v)), dt_(dt) {
  if (!(dt > 0)) throw UsageError("schrodinger: dt must be > 0");
  kinetic_half_.resize(g.n_z);
  potential_.resize(g.n_z);
  for (int l = 0; l < g.n_z; ++l)
    kinetic_half_(l) = std::polar(
        1.0, -0.5 * dt * g.hbar * g.k(l) * g.k(l) / (2 * g.mass));
  for (int i = 0; i < g.n_z; ++i)
    potential_(i) = std::polar(1.0, -dt * v_(g.x(i)) / g.hbar);
}

void SchrodingerPropagator::step(QuantumWaveFunction& psi) {
  // Same substep order as the phase-space propagator: kinetic half,
  // potential, kinetic half.
  CVector k = spectral::x_to_k(psi.values, grid_);
  k.array() *= kinetic_half_.array();
  psi.values = spectral::k_to_x(k, grid_);
  psi.values.array() *= potential_.array();
  k = spectral::x_to_k(psi.values, grid_);
  k.array() *= kinetic_half_.array();
  psi.values = spectral::k_to_x(k, grid_);
}

QuantumWaveFunction schrodinger_step(const QuantumWaveFunction& psi,
                                     const Potential& v, Real dt) {
  SchrodingerPropagator prop(psi.grid, v, dt);
  QuantumWaveFunction out = psi;
  prop.step(out);
  return out;
}

QuantumWaveFunction schrodinger_evolve(const QuantumWaveFunction& psi,
                                       const Potential& v, Real dt,
                                       Real t_final) {
  const Real steps_real = t_final / dt;
  const long n_steps = std::lround(steps_real);
  if (std::abs(steps_real - Real(n_steps)) > 1e-9 * std::max(1.0, steps_real))
    throw UsageError("schrodinger_evolve: T/dt must be integral");
  SchrodingerPropagator prop(psi.grid, v, dt);
  QuantumWaveFunction out = psi;
  for (long s = 0; s < n_steps; ++s) prop.step(out);
  return out;
}

// ---- Liouville oracle ----

namespace {

// Periodic Catmull-Rom interpolation on the (z,p) lattice.
struct Bicubic {
  const Array& w;
  int nz, np;
  Real z0, p0, dz, dp;

  static void weights(Real t, Real out[4]) {
    out[0] = 0.5 * (-t * t * t + 2 * t * t - t);
    out[1] = 0.5 * (3 * t * t * t - 5 * t * t + 2);
    out[2] = 0.5 * (-3 * t * t * t + 4 * t * t + t);
    out[3] = 0.5 * (t * t * t - t * t);
  }

  Real operator()(Real z, Real p) const {
    const Real uz = (z - z0) / dz;
    const Real up = (p - p0) / dp;
    const int iz = int(std::floor(uz));
    const int ip = int(std::floor(up));
    Real wz[4], wp[4];
    weights(uz - iz, wz);
    weights(up - ip, wp);
    Real acc = 0;
    for (int a = 0; a < 4; ++a) {
      const int jz = ((iz - 1 + a) % nz + nz) % nz;
      Real rowacc = 0;
      for (int b = 0; b < 4; ++b) {
        const int jp = ((ip - 1 + b) % np + np) % np;
        rowacc += wp[b] * w(jz, jp);
      }
      acc += wz[a] * rowacc;
    }
    return acc;
  }
};

}  // namespace

LiouvilleResult liouville_characteristics(const RealPhaseField& w0,
                                          const Potential& v, Real t_final,
                                          int substeps) {
  if (substeps < 1) throw UsageError("liouville: substeps must be >= 1");
  const GridSpec& g = w0.grid;
  const Real dt = -t_final / substeps;  // backward in time
  Bicubic interp{w0.values, g.n_z, g.n_p, g.z(0), g.p(0), g.dz(), g.dp()};

  RealPhaseField out = RealPhaseField::zero(g);
  const Real lz = g.z_extent;
  for (int j = 0; j < g.n_z; ++j) {
    for (int a = 0; a < g.n_p; ++a) {
      Real z = g.z(j), p = g.p(a);
      for (int s = 0; s < substeps; ++s) {
        p += 0.5 * dt * (-v.deriv(z));
        z += dt * p / g.mass;
        p += 0.5 * dt * (-v.deriv(z));
      }
      // Periodic wrap keeps the interpolation stencil in range; interior
      // support makes the branch choice irrelevant.
      z -= lz * std::floor((z - g.z(0)) / lz);
      out.values(j, a) = interp(z, p);
    }
  }
  const Real total = integrate_phase_space(out);
  if (!(total > 0)) throw Error("liouville: transported mass vanished");
  const Real factor = 1.0 / total;
  out.values *= factor;
  return {std::move(out), factor};
}

}  // namespace zwitter
