#include "zwitter/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace zwitter {

// ---- fringe analysis ----

namespace {
std::pair<int, int> central_window(const PositionDistribution& m,
                                   Real window_fraction) {
  const int n = int(m.z.size());
  const int half = int(n * window_fraction / 2);
  return {n / 2 - half, n / 2 + half};
}
}  // namespace

Real fringe_visibility(const PositionDistribution& marginal,
                       Real window_fraction) {
  auto [lo, hi] = central_window(marginal, window_fraction);
  Real imax = -std::numeric_limits<Real>::max();
  Real imin = std::numeric_limits<Real>::max();
  for (int i = lo; i < hi; ++i) {
    imax = std::max(imax, marginal.density(i));
    imin = std::min(imin, marginal.density(i));
  }
  imin = std::max(imin, 0.0);  // quasi-probability noise floor
  if (imax + imin <= 0) return 0;
  return (imax - imin) / (imax + imin);
}

Real fringe_spacing(const PositionDistribution& marginal,
                    Real window_fraction) {
  auto [lo, hi] = central_window(marginal, window_fraction);
  const Real floor = 0.05 * marginal.density.maxCoeff();
  std::vector<Real> peaks;
  for (int i = std::max(lo, 1); i < std::min(hi, int(marginal.z.size()) - 1);
       ++i) {
    const Real v = marginal.density(i);
    if (v > floor && v > marginal.density(i - 1) && v >= marginal.density(i + 1))
      peaks.push_back(marginal.z(i));
  }
  if (peaks.size() < 2) return 0;
  Real acc = 0;
  for (size_t i = 1; i < peaks.size(); ++i) acc += peaks[i] - peaks[i - 1];
  return acc / Real(peaks.size() - 1);
}

DoubleSlitResult run_double_slit(const DoubleSlitConfig& cfg) {
  const GridSpec& g = cfg.grid;
  const QuantumWaveFunction psi_q0 =
      double_slit_state(g, cfg.separation, cfg.sigma, cfg.p0);
  const PureStateDensity initial = pure_state_density(psi_q0);

  DoubleSlitResult out;
  out.fringe_spacing_expected =
      2 * pi * g.hbar * cfg.horizon / (g.mass * cfg.separation);

  for (Real gamma : cfg.gammas) {
    PropagatorConfig pc;
    pc.gamma = gamma;
    pc.dt = cfg.dt;
    pc.scheme = cfg.scheme;
    EvolutionObservers obs;
    obs.cadence = 1000000;  // end-point diagnostics only
    auto [final_state, report] =
        evolve(initial.psi_c.field, cfg.envelope, pc, cfg.horizon, obs);

    FringeProfile profile;
    profile.gamma = gamma;
    profile.marginal = position_distribution(
        quantum_transform_via_density_matrix(final_state));
    profile.visibility = fringe_visibility(profile.marginal);
    out.profiles.push_back(std::move(profile));

    if (std::abs(gamma - pi / 2) < 1e-12)
      out.classical_marginal = position_distribution(
          {final_state.grid, final_state.values.square()});
    if (gamma == 0)
      out.fringe_spacing_measured = fringe_spacing(out.profiles.back().marginal);
  }

  // Schrodinger lane for the gamma = 0 cross-check.
  const QuantumWaveFunction psi_t =
      schrodinger_evolve(psi_q0, cfg.envelope, cfg.dt, cfg.horizon);
  out.oracle.gamma = 0;
  out.oracle.marginal = position_distribution(wigner_of_pure_state(psi_t));
  out.oracle.visibility = fringe_visibility(out.oracle.marginal);
  return out;
}

// ---- spectroscopy ----

GroundStateOutput zwitter_ground_state(const GroundStateConfig& cfg,
                                       Real gamma) {
  const GridSpec& g = cfg.grid;
  SpectrumOptions sopts;
  sopts.tol = cfg.spectrum_tol;
  const SpectrumSlice spectrum = solve_spectrum(g, cfg.potential, sopts);
  const PureStateDensity start = pure_state_density(spectrum.psi0);

  PropagatorConfig pc;
  pc.gamma = gamma;
  pc.dt = cfg.dt;
  pc.scheme = cfg.scheme;
  ZwitterPropagator prop(g, cfg.potential, pc);

  RealPhaseField psi_c = start.psi_c.field;
  const long relax_steps = std::lround(cfg.relax_horizon / cfg.dt);
  for (long s = 0; s < relax_steps; ++s) prop.step(psi_c);

  // Hann-weighted average of rho_Q over the averaging window; plain averages
  // of the two window halves feed the stationarity check.
  const long avg_steps = std::lround(cfg.averaging_window / cfg.dt);
  const int stride = std::max(1, cfg.sample_stride);
  CMatrix rho_sum = CMatrix::Zero(g.n_z, g.n_z);
  CMatrix half1 = CMatrix::Zero(g.n_z, g.n_z);
  CMatrix half2 = CMatrix::Zero(g.n_z, g.n_z);
  Real weight_sum = 0;
  long n1 = 0, n2 = 0;
  for (long s = 0; s <= avg_steps; ++s) {
    if (s % stride == 0) {
      const CoarseDensityMatrix rho =
          coarse_grain(to_xy_representation(psi_c));
      const Real u = Real(s) / Real(avg_steps);
      const Real w = 0.5 * (1 - std::cos(2 * pi * u));
      rho_sum += w * rho.rho;
      weight_sum += w;
      if (u < 0.5) {
        half1 += rho.rho;
        ++n1;
      } else {
        half2 += rho.rho;
        ++n2;
      }
    }
    if (s < avg_steps) prop.step(psi_c);
  }

  GroundStateOutput out;
  out.psi0 = spectrum.psi0;
  out.averaged_rho = {g, rho_sum / weight_sum, g.dz()};

  const CMatrix h = hamiltonian_matrix(g, cfg.potential);
  const CMatrix rho_op = out.averaged_rho.rho * out.averaged_rho.dx;
  const Real mean_e = (rho_op * h).trace().real();
  const Real mean_e2 = (rho_op * h * h).trace().real();

  SpectroscopyResult& r = out.result;
  r.gamma = gamma;
  r.e0 = spectrum.e0;
  r.mean_energy = mean_e;
  r.delta_e = std::sqrt(std::max(0.0, mean_e2 - mean_e * mean_e));
  r.shift_e = mean_e - spectrum.e0;
  const Real s2 = std::sin(gamma) * std::sin(gamma);
  if (s2 > 0) {
    r.f1_effective = r.delta_e / (s2 * std::abs(spectrum.e0));
    if (r.delta_e > 0) r.f2_effective = r.shift_e / (s2 * r.delta_e);
  }
  if (n1 > 0 && n2 > 0) {
    const Real drift = ((half1 / Real(n1)) - (half2 / Real(n2))).norm() /
                       std::max(1e-300, (rho_sum / weight_sum).norm());
    r.window_drift = drift;
    r.stationary = drift <= 0.01;
  }
  r.n_z = g.n_z;
  r.n_p = g.n_p;
  r.dt = cfg.dt;
  r.t_relax = cfg.relax_horizon;
  r.t_average = cfg.averaging_window;
  return out;
}

PowerLawFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw UsageError("fit_line needs >= 2 points");
  const Real n = Real(x.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  PowerLawFit fit;
  const Real denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw ConvergenceError("degenerate fit");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  Real ss_res = 0, ss_tot = 0;
  const Real ybar = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const Real pred = fit.slope * x[i] + fit.intercept;
    fit.residuals.push_back(y[i] - pred);
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot > 0 ? 1 - ss_res / ss_tot : 1;
  return fit;
}

GammaScanResult scan_gamma(const GroundStateConfig& cfg,
                           const std::vector<Real>& gammas) {
  GammaScanResult out;
  for (Real gamma : gammas)
    out.rows.push_back(zwitter_ground_state(cfg, gamma).result);

  std::vector<Real> log_s2, log_de, log_ratio;
  std::vector<Real> log_s2_ratio;
  for (const auto& r : out.rows) {
    const Real s2 = std::sin(r.gamma) * std::sin(r.gamma);
    if (s2 <= 0 || r.delta_e <= 0) continue;
    log_s2.push_back(std::log(s2));
    log_de.push_back(std::log(r.delta_e));
    if (r.shift_e > 0) {
      log_s2_ratio.push_back(std::log(s2));
      log_ratio.push_back(std::log(r.shift_e / r.delta_e));
    }
  }
  if (log_s2.size() < 4)
    throw ConvergenceError("scan_gamma: fewer than 4 usable gamma points");
  out.de_fit = fit_line(log_s2, log_de);
  if (log_ratio.size() >= 2) out.ratio_fit = fit_line(log_s2_ratio, log_ratio);
  return out;
}

DoubleWellReport run_double_well_proximity(const DoubleWellConfig& cfg) {
  DoubleWellReport out;
  SpectrumOptions sopts;
  sopts.tol = cfg.base.spectrum_tol;
  const SpectrumSlice spectrum =
      solve_spectrum(cfg.base.grid, cfg.base.potential, sopts);
  out.splitting = spectrum.e1 - spectrum.e0;

  std::vector<Real> log_s2, log_de;
  for (Real gamma : cfg.gammas) {
    out.rows.push_back(zwitter_ground_state(cfg.base, gamma).result);
    const auto& r = out.rows.back();
    out.ratios.push_back(out.splitting > 0 ? r.delta_e / out.splitting : 0);
    const Real s2 = std::sin(gamma) * std::sin(gamma);
    if (s2 > 0 && r.delta_e > 0) {
      log_s2.push_back(std::log(s2));
      log_de.push_back(std::log(r.delta_e));
    }
  }

  if (log_s2.size() >= 2 && out.splitting > 0) {
    auto crossing_from = [&](const PowerLawFit& fit) -> std::optional<Real> {
      const Real ls2 = (std::log(out.splitting) - fit.intercept) / fit.slope;
      const Real s2 = std::exp(ls2);
      if (s2 <= 0 || s2 > 1) return std::nullopt;
      return std::asin(std::sqrt(s2));
    };
    const PowerLawFit fit = fit_line(log_s2, log_de);
    out.crossing_gamma = crossing_from(fit);

    // Residual bootstrap for the crossing uncertainty.
    if (out.crossing_gamma) {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_int_distribution<size_t> pick(0, fit.residuals.size() - 1);
      std::vector<Real> samples;
      for (int b = 0; b < cfg.bootstrap_samples; ++b) {
        std::vector<Real> yy(log_de.size());
        for (size_t i = 0; i < yy.size(); ++i) {
          const Real pred = fit.slope * log_s2[i] + fit.intercept;
          yy[i] = pred + fit.residuals[pick(rng)];
        }
        if (auto g = crossing_from(fit_line(log_s2, yy))) samples.push_back(*g);
      }
      if (samples.size() > 1) {
        Real mean = 0;
        for (Real s : samples) mean += s;
        mean /= Real(samples.size());
        Real var = 0;
        for (Real s : samples) var += (s - mean) * (s - mean);
        out.crossing_uncertainty = std::sqrt(var / Real(samples.size() - 1));
      }
    }
  }
  return out;
}

}  // namespace zwitter
