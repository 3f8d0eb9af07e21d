#include "zwitter/state.hpp"

#include "zwitter/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace zwitter {

// ---- Potential ----

Potential Potential::harmonic(Real omega) {
  return Potential(Kind::Harmonic, {omega});
}
Potential Potential::quartic(Real omega, Real lambda) {
  return Potential(Kind::Quartic, {omega, lambda});
}
Potential Potential::double_well(Real a, Real b) {
  if (!(a > 0) || !(b > 0))
    throw UsageError("double_well requires a > 0 and b > 0");
  return Potential(Kind::DoubleWell, {a, b});
}
Potential Potential::gaussian_barrier(Real height, Real width,
                                      std::vector<Real> centers) {
  if (!(width > 0)) throw UsageError("gaussian_barrier requires width > 0");
  std::vector<Real> p{height, width};
  p.insert(p.end(), centers.begin(), centers.end());
  return Potential(Kind::GaussianBarrier, std::move(p));
}

Potential free_potential() { return Potential::harmonic(0.0); }

Real Potential::operator()(Real x) const {
  switch (kind_) {
    case Kind::Harmonic: {
      const Real w = params_[0];
      return 0.5 * w * w * x * x;
    }
    case Kind::Quartic: {
      const Real w = params_[0], l = params_[1];
      return 0.5 * w * w * x * x + l * x * x * x * x;
    }
    case Kind::DoubleWell: {
      const Real a = params_[0], b = params_[1];
      return a * x * x * x * x - b * x * x + b * b / (4 * a);
    }
    case Kind::GaussianBarrier: {
      const Real h = params_[0], w = params_[1];
      Real v = 0;
      for (size_t i = 2; i < params_.size(); ++i) {
        const Real d = x - params_[i];
        v += h * std::exp(-d * d / (2 * w * w));
      }
      return v;
    }
  }
  return 0;
}

Real Potential::deriv(Real x) const {
  switch (kind_) {
    case Kind::Harmonic: {
      const Real w = params_[0];
      return w * w * x;
    }
    case Kind::Quartic: {
      const Real w = params_[0], l = params_[1];
      return w * w * x + 4 * l * x * x * x;
    }
    case Kind::DoubleWell: {
      const Real a = params_[0], b = params_[1];
      return 4 * a * x * x * x - 2 * b * x;
    }
    case Kind::GaussianBarrier: {
      const Real h = params_[0], w = params_[1];
      Real v = 0;
      for (size_t i = 2; i < params_.size(); ++i) {
        const Real d = x - params_[i];
        v += -h * d / (w * w) * std::exp(-d * d / (2 * w * w));
      }
      return v;
    }
  }
  return 0;
}

std::string Potential::str() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::Harmonic:
      os << "harmonic:omega=" << params_[0];
      break;
    case Kind::Quartic:
      os << "quartic:omega=" << params_[0] << ",lambda=" << params_[1];
      break;
    case Kind::DoubleWell:
      os << "double_well:a=" << params_[0] << ",b=" << params_[1];
      break;
    case Kind::GaussianBarrier:
      os << "gaussian_barrier:height=" << params_[0] << ",width=" << params_[1]
         << ",centers=";
      for (size_t i = 2; i < params_.size(); ++i)
        os << (i > 2 ? ";" : "") << params_[i];
      break;
  }
  return os.str();
}

namespace {
Real parse_number(const std::string& s) {
  size_t used = 0;
  const Real v = std::stod(s, &used);
  if (used != s.size()) throw UsageError("bad number in potential: " + s);
  return v;
}
}  // namespace

Potential Potential::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::istringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw UsageError("potential parameter without '=': " + item);
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto want = [&](const char* key) -> Real {
    auto it = kv.find(key);
    if (it == kv.end())
      throw UsageError(std::string("potential '") + name + "' needs " + key);
    return parse_number(it->second);
  };
  if (name == "free") return free_potential();
  if (name == "harmonic") return harmonic(want("omega"));
  if (name == "quartic") return quartic(want("omega"), want("lambda"));
  if (name == "double_well" || name == "doublewell")
    return double_well(want("a"), want("b"));
  if (name == "gaussian_barrier") {
    auto it = kv.find("centers");
    if (it == kv.end()) throw UsageError("gaussian_barrier needs centers");
    std::vector<Real> centers;
    std::istringstream cs(it->second);
    std::string c;
    while (std::getline(cs, c, ';')) centers.push_back(parse_number(c));
    return gaussian_barrier(want("height"), want("width"), std::move(centers));
  }
  throw UsageError("unknown potential kind: " + name);
}

bool Potential::is_confining(const GridSpec& g, Real margin) const {
  Real vmin = std::numeric_limits<Real>::max();
  for (int j = 0; j < g.n_z; ++j) vmin = std::min(vmin, (*this)(g.z(j)));
  const Real edge = 0.45 * g.z_extent;
  return (*this)(edge) >= vmin + margin && (*this)(-edge) >= vmin + margin;
}

// ---- densities and classical wave functions ----

ProbabilityDensity ProbabilityDensity::checked(RealPhaseField w) {
  w.check_shape();
  if ((w.values < 0).any())
    throw NormalizationError("probability density has negative entries");
  const Real total = integrate_phase_space(w);
  if (std::abs(total - 1) > 1e-9)
    throw NormalizationError("probability density integrates to " +
                             std::to_string(total));
  return {std::move(w)};
}

ProbabilityDensity density_from_wavefunction(const ClassicalWaveFunction& psi) {
  RealPhaseField w{psi.field.grid, psi.field.values.square()};
  return ProbabilityDensity::unchecked(std::move(w));
}

ClassicalWaveFunction wavefunction_from_density(const ProbabilityDensity& w,
                                                const SignRule& rule) {
  const Array root = w.field.values.sqrt();
  ClassicalWaveFunction out;
  out.field.grid = w.field.grid;
  if (rule.kind == SignRule::Kind::AllPositive) {
    out.field.values = root;
    out.sign_provenance = "all_positive";
  } else {
    require_same_grid(w.field.grid, rule.reference->grid,
                      "wavefunction_from_density");
    // sign(g) where |g| > 0; zeros of the reference get +1.
    out.field.values =
        root * (rule.reference->values < 0).select(-Array::Ones(root.rows(), root.cols()),
                                                   Array::Ones(root.rows(), root.cols()));
    out.sign_provenance = "from_reference_field";
  }
  return out;
}

// ---- Wigner transform of a pure state ----

RealPhaseField wigner_of_pure_state(const QuantumWaveFunction& psi) {
  const GridSpec& g = psi.grid;
  if (!g.square())
    throw GridMismatchError("wigner_of_pure_state: requires n_p == n_z");
  if (psi.values.size() != g.n_z)
    throw GridMismatchError("wigner_of_pure_state: psi size mismatch");
  const int n = g.n_z;
  auto wrap = [n](int i) { return ((i % n) + n) % n; };

  // Anti-diagonal gather: D(j, m) = psi(z_j + s dz) conj(psi(z_j - s dz)),
  // s = m - n/2; then an exact centered DFT in m (dr == 2 dz).
  CArray d(n, n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      const int s = m - n / 2;
      d(j, m) = psi.values(wrap(j + s)) * std::conj(psi.values(wrap(j - s)));
    }
  spectral::centered_fft(d.data(), n, n, n, 1, +1);
  d *= g.dr();

  const Real scale = d.abs().maxCoeff();
  if (scale > 0 && d.imag().abs().maxCoeff() > 1e-11 * scale)
    throw RealityError("wigner_of_pure_state: imaginary residue above 1e-11");
  return {g, d.real()};
}

PureStateDensity pure_state_density(const QuantumWaveFunction& psi) {
  RealPhaseField psi_c = wigner_of_pure_state(psi);
  const Real total = integrate_phase_space({psi_c.grid, psi_c.values.square()});
  if (std::abs(total - 1) > 1e-6)
    throw NormalizationError(
        "pure_state_density: purity normalization off by " +
        std::to_string(total - 1) + " (grid too small?)");
  PureStateDensity out;
  out.purity_correction = std::sqrt(total);
  psi_c.values /= out.purity_correction;
  out.psi_c = {psi_c, "wigner_of_pure_state"};
  out.w = density_from_wavefunction(out.psi_c);
  return out;
}

// ---- initial states ----

namespace {
void check_wavefunction_boundaries(const QuantumWaveFunction& psi,
                                   Real threshold = 1e-10) {
  const GridSpec& g = psi.grid;
  const int n = g.n_z;
  Real edge = 0;
  for (int i = 0; i < n; ++i)
    if (i < 5 || i >= n - 5) edge += std::norm(psi.values(i)) * g.dz();
  if (edge > threshold)
    throw BoundaryMassError("domain-overflow: position boundary mass " +
                            std::to_string(edge));
  // Momentum content must stay inside the +-p_extent/2 window the phase-space
  // lattice can represent.
  const CVector psik = spectral::x_to_k(psi.values, g);
  Real pmass = 0, total = 0;
  for (int l = 0; l < n; ++l) {
    const Real m = std::norm(psik(l)) * g.dk() / (2 * pi);
    total += m;
    if (std::abs(g.hbar * g.k(l)) > 0.5 * g.p_extent - 5 * g.dp()) pmass += m;
  }
  if (pmass / total > threshold)
    throw BoundaryMassError("domain-overflow: momentum boundary mass " +
                            std::to_string(pmass / total));
}
}  // namespace

QuantumWaveFunction gaussian_packet(const GridSpec& g, Real z0, Real p0,
                                    Real sigma) {
  if (!(sigma > 0)) throw UsageError("gaussian_packet: sigma must be > 0");
  QuantumWaveFunction psi{g, CVector(g.n_z)};
  for (int i = 0; i < g.n_z; ++i) {
    const Real x = g.x(i);
    const Real envelope = std::exp(-(x - z0) * (x - z0) / (4 * sigma * sigma));
    psi.values(i) = std::polar(envelope, p0 * (x - z0) / g.hbar);
  }
  psi.values /= psi.norm();
  check_wavefunction_boundaries(psi);
  return psi;
}

QuantumWaveFunction double_slit_state(const GridSpec& g, Real separation,
                                      Real sigma, Real p0) {
  if (!(separation > 4 * sigma))
    throw UsageError("double_slit_state: slits not resolvable (need d > 4 sigma)");
  QuantumWaveFunction psi{g, CVector(g.n_z)};
  for (int i = 0; i < g.n_z; ++i) {
    const Real x = g.x(i);
    const Real gl = std::exp(-std::pow(x + separation / 2, 2) / (4 * sigma * sigma));
    const Real gr = std::exp(-std::pow(x - separation / 2, 2) / (4 * sigma * sigma));
    psi.values(i) = std::polar(gl + gr, p0 * x / g.hbar);
  }
  psi.values /= psi.norm();  // discrete norm carries the overlap correction
  check_wavefunction_boundaries(psi);
  return psi;
}

// ---- Hamiltonian application and spectrum ----

CVector apply_hamiltonian(const CVector& psi, const GridSpec& g,
                          const Potential& V) {
  CVector k = spectral::x_to_k(psi, g);
  for (int l = 0; l < g.n_z; ++l)
    k(l) *= g.hbar * g.hbar * g.k(l) * g.k(l) / (2 * g.mass);
  CVector out = spectral::k_to_x(k, g);
  for (int i = 0; i < g.n_z; ++i) out(i) += V(g.x(i)) * psi(i);
  return out;
}

CMatrix hamiltonian_matrix(const GridSpec& g, const Potential& V) {
  const int n = g.n_z;
  // Unitary centered DFT in the sqrt(dx) coefficient convention.
  CMatrix u(n, n);
  const Real scale = std::sqrt(g.dz() * g.dk() / (2 * pi));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      u(l, i) = std::polar(scale, -g.k(l) * g.x(i));
  CMatrix ke = u.adjoint() *
               (CVector::NullaryExpr(n, [&](int l) {
                  return Complex(g.hbar * g.hbar * g.k(l) * g.k(l) / (2 * g.mass), 0);
                }).asDiagonal() *
                u);
  for (int i = 0; i < n; ++i) ke(i, i) += V(g.x(i));
  return ke;
}

namespace {

Real rayleigh(const CVector& psi, const GridSpec& g, const Potential& V) {
  const CVector h = apply_hamiltonian(psi, g, V);
  return (psi.dot(h)).real() * g.dz();
}

Real eigen_residual(const CVector& psi, const GridSpec& g, const Potential& V,
                    Real e) {
  const CVector r = apply_hamiltonian(psi, g, V) - e * psi;
  return std::sqrt(r.squaredNorm() * g.dz());
}

// One imaginary-time Strang step, kinetic-potential-kinetic, renormalized.
void itp_step(CVector& psi, const GridSpec& g, const Potential& V, Real dtau) {
  CVector k = spectral::x_to_k(psi, g);
  for (int l = 0; l < g.n_z; ++l)
    k(l) *= std::exp(-dtau / 2 * g.hbar * g.hbar * g.k(l) * g.k(l) /
                     (2 * g.mass * g.hbar));
  psi = spectral::k_to_x(k, g);
  for (int i = 0; i < g.n_z; ++i)
    psi(i) *= std::exp(-dtau * V(g.x(i)) / g.hbar);
  k = spectral::x_to_k(psi, g);
  for (int l = 0; l < g.n_z; ++l)
    k(l) *= std::exp(-dtau / 2 * g.hbar * g.hbar * g.k(l) * g.k(l) /
                     (2 * g.mass * g.hbar));
  psi = spectral::k_to_x(k, g);
  psi /= std::sqrt(psi.squaredNorm() * g.dz());
}

void project_out(CVector& psi, const CVector& base, const GridSpec& g) {
  psi -= base * (base.dot(psi) * g.dz());
  psi /= std::sqrt(psi.squaredNorm() * g.dz());
}

}  // namespace

SpectrumSlice solve_spectrum(const GridSpec& g, const Potential& V,
                             const SpectrumOptions& opts) {
  if (!V.is_confining(g))
    throw UsageError("solve_spectrum: potential is not confining on this domain");

  // Seeds near the potential minimum; the excited seed carries a node.
  Real xmin = 0, vmin = std::numeric_limits<Real>::max();
  for (int j = 0; j < g.n_z; ++j)
    if (V(g.z(j)) < vmin) vmin = V(g.z(j)), xmin = g.z(j);
  const Real seed_sigma = std::max(0.5, 4 * g.dz());
  CVector psi0(g.n_z), psi1(g.n_z);
  for (int i = 0; i < g.n_z; ++i) {
    const Real x = g.x(i);
    psi0(i) = std::exp(-(x - xmin) * (x - xmin) / (4 * seed_sigma * seed_sigma));
    psi1(i) = x * std::exp(-x * x / (4 * seed_sigma * seed_sigma));
  }
  psi0 /= std::sqrt(psi0.squaredNorm() * g.dz());
  psi1 /= std::sqrt(psi1.squaredNorm() * g.dz());

  SpectrumSlice out;
  int iterations = 0;
  const Real dtaus[] = {0.2, 0.05, 0.01, 0.002};

  auto relax = [&](CVector& psi, const CVector* deflate) {
    Real e = rayleigh(psi, g, V);
    Real res = eigen_residual(psi, g, V, e);
    for (Real dtau : dtaus) {
      Real prev = std::numeric_limits<Real>::max();
      while (iterations < opts.max_iterations) {
        ++iterations;
        itp_step(psi, g, V, dtau);
        if (deflate) project_out(psi, *deflate, g);
        if (iterations % 25 == 0) {
          e = rayleigh(psi, g, V);
          res = eigen_residual(psi, g, V, e);
          if (res <= opts.tol) return std::pair{e, res};
          if (res > 0.9999 * prev) break;  // stage floor reached
          prev = res;
        }
      }
    }
    if (res > opts.tol)
      throw ConvergenceError("solve_spectrum: residual " + std::to_string(res) +
                             " after iteration cap");
    return std::pair{e, res};
  };

  auto [e0, r0] = relax(psi0, nullptr);
  auto [e1, r1] = relax(psi1, &psi0);

  out.e0 = e0;
  out.e1 = e1;
  out.residual0 = r0;
  out.residual1 = r1;
  out.psi0 = {g, psi0};
  out.psi1 = {g, psi1};
  out.iterations = iterations;
  if (out.e1 < out.e0) {
    std::swap(out.e0, out.e1);
    std::swap(out.psi0, out.psi1);
    std::swap(out.residual0, out.residual1);
  }
  return out;
}

}  // namespace zwitter
