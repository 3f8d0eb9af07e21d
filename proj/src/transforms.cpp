#include "zwitter/transforms.hpp"

#include "zwitter/spectral.hpp"

#include <Eigen/Eigenvalues>

namespace zwitter {

namespace {

void require_wigner_square(const GridSpec& g, const char* what) {
  if (!g.square())
    throw GridMismatchError(std::string(what) + ": requires n_p == n_z");
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Centered representative of i - j on the periodic x-lattice, in [-n/2, n/2).
int centered_separation(int i, int j, int n) {
  int d = (i - j) % n;
  if (d < -n / 2) d += n;
  if (d >= n / 2) d -= n;
  return d;
}

// Fine-lattice transforms of psi_C with kernel exp(+i p r / hbar), on the
// integer z-lattice and on the half-shifted lattice z + dz/2.
struct FinePair {
  CArray integer_z;  // (n_z, 2 n_p)
  CArray half_z;
};

FinePair fine_plus_pair(const Array& psi_c, const GridSpec& g) {
  FinePair out;
  out.integer_z = spectral::fine_r_plus(psi_c, g);
  out.half_z = out.integer_z;
  // Shift columns (fixed r) along z; the fine array is (n_z x 2 n_p) but the
  // shift only needs the z-axis geometry, so reuse the grid row transforms.
  spectral::half_shift_z_inplace(out.half_z, g, +1);
  return out;
}

}  // namespace

Real CoarseDensityMatrix::min_eigenvalue() const {
  CMatrix h = 0.5 * (rho + rho.adjoint()) * dx;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void CoarseDensityMatrix::validate() const {
  if (hermiticity_defect() > 1e-10)
    throw HermiticityError("rho_Q hermiticity defect " +
                           std::to_string(hermiticity_defect()));
  if (std::abs(trace() - 1) > 1e-8)
    throw NormalizationError("rho_Q trace " + std::to_string(trace()));
  const Real lmin = min_eigenvalue();
  if (lmin < -1e-8)
    throw NormalizationError("rho_Q has eigenvalue " + std::to_string(lmin));
}

XYWaveFunction to_xy_representation(const RealPhaseField& psi_c) {
  const GridSpec& g = psi_c.grid;
  require_wigner_square(g, "to_xy_representation");
  const int n = g.n_z;
  const FinePair fine = fine_plus_pair(psi_c.values, g);
  const Real scale = 1.0 / (2 * pi * g.hbar);

  XYWaveFunction out{g, CMatrix(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int rep = centered_separation(i, j, n);  // r = rep * dz
      const int c = rep + n;                         // fine r index
      if ((rep & 1) == 0) {
        const int mid = wrap(j + rep / 2, n);
        out.values(i, j) = scale * fine.integer_z(mid, c);
      } else {
        const int mid = wrap(j + (rep - 1) / 2, n);  // + dz/2 via half array
        out.values(i, j) = scale * fine.half_z(mid, c);
      }
    }
  }
  return out;
}

XYWaveFunction to_xy_representation(const ClassicalWaveFunction& psi_c) {
  return to_xy_representation(psi_c.field);
}

RealPhaseField from_xy_representation(const XYWaveFunction& xy) {
  const GridSpec& g = xy.grid;
  require_wigner_square(g, "from_xy_representation");
  const int n = g.n_z;
  // Gather Phi+(z_j, r_c) on the coarse r-lattice from even separations,
  // then invert the + kernel: psi_C = dr/(2 pi hbar) sum_c e^{-i p r_c} Phi+.
  CArray phi(n, n);
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < n; ++c) {
      const int s = c - n / 2;
      phi(j, c) = 2 * pi * g.hbar * xy.values(wrap(j + s, n), wrap(j - s, n));
    }
  spectral::centered_fft(phi.data(), n, n, n, 1, +1);
  phi *= g.dr() / (2 * pi * g.hbar);
  const Real scale = phi.abs().maxCoeff();
  if (scale > 0 && phi.imag().abs().maxCoeff() > 1e-10 * scale)
    throw RealityError("from_xy_representation: imaginary residue");
  return {g, phi.real()};
}

CoarseDensityMatrix coarse_grain(const XYWaveFunction& xy) {
  CoarseDensityMatrix out;
  out.grid = xy.grid;
  out.dx = xy.grid.dz();
  out.rho = xy.values * xy.values.adjoint() * out.dx;
  return out;
}

RealPhaseField wigner_of_density_matrix(const CoarseDensityMatrix& rho) {
  const GridSpec& g = rho.grid;
  require_wigner_square(g, "wigner_of_density_matrix");
  const int n = g.n_z;
  CArray d(n, n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      const int s = m - n / 2;
      d(j, m) = rho.rho(wrap(j + s, n), wrap(j - s, n));
    }
  spectral::centered_fft(d.data(), n, n, n, 1, +1);
  d *= g.dr();
  const Real scale = d.abs().maxCoeff();
  if (scale > 0 && d.imag().abs().maxCoeff() > 1e-9 * scale)
    throw RealityError("wigner_of_density_matrix: imaginary residue");
  return {g, d.real()};
}

RealPhaseField quantum_transform(const RealPhaseField& psi_c) {
  const GridSpec& g = psi_c.grid;
  require_wigner_square(g, "quantum_transform");
  const int n = g.n_z;
  const int m = 2 * n;  // fine lattice size

  // Psi-(z, r) = conj(Psi+) for real psi_C, on integer and half z-lattices.
  FinePair fine = fine_plus_pair(psi_c.values, g);
  fine.integer_z = fine.integer_z.conjugate();
  fine.half_z = fine.half_z.conjugate();

  const Real kappa = g.dz() * g.dz() / std::pow(2 * pi * g.hbar, 2);
  Array w(n, n);
  CArray a(m, m);
  CVector folded(m);

  for (int j = 0; j < n; ++j) {
    // A(c, c') = Psi-(z_j + r_c/2, r_{c'}); rows gathered from the two
    // shifted arrays.
    for (int c = 0; c < m; ++c) {
      const int rep = c - n;
      if ((rep & 1) == 0)
        a.row(c) = fine.integer_z.row(wrap(j + rep / 2, n));
      else
        a.row(c) = fine.half_z.row(wrap(j + (rep - 1) / 2, n));
    }
    // Anti-diagonal contraction E(delta) = sum_c A(c, c+delta) conj(A(c+delta, c)),
    // folded mod 2n onto a centered index (the p-phase has period 2n in delta).
    folded.setZero();
    for (int delta = -(m - 1); delta <= m - 1; ++delta) {
      Complex e = 0;
      const int clo = std::max(0, -delta);
      const int chi = std::min(m, m - delta);
      for (int c = clo; c < chi; ++c)
        e += a(c, c + delta) * std::conj(a(c + delta, c));
      folded(wrap(delta + n, m)) += e;
    }
    // W(z_j, p_a) = kappa * Re sum_delta e^{+i p_a delta dz / hbar} E(delta);
    // a centered 2n-point DFT read out on its central n frequencies.
    spectral::centered_fft(folded.data(), m, 1, 1, m, -1);
    for (int aidx = 0; aidx < n; ++aidx)
      w(j, aidx) = kappa * folded(aidx + n / 2).real();
  }
  return {g, w};
}

RealPhaseField quantum_transform(const ClassicalWaveFunction& psi_c) {
  return quantum_transform(psi_c.field);
}

RealPhaseField quantum_transform_via_density_matrix(const RealPhaseField& psi_c) {
  return wigner_of_density_matrix(coarse_grain(to_xy_representation(psi_c)));
}

PositionDistribution position_distribution(const RealPhaseField& f) {
  PositionDistribution out;
  out.z.resize(f.grid.n_z);
  out.density.resize(f.grid.n_z);
  const Real weight = f.grid.dp() / (2 * pi * f.grid.hbar);
  for (int j = 0; j < f.grid.n_z; ++j) {
    out.z(j) = f.grid.z(j);
    out.density(j) = f.values.row(j).sum() * weight;
  }
  return out;
}

}  // namespace zwitter
