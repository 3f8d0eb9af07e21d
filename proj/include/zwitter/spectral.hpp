#pragma once

#include "zwitter/core.hpp"

// Centered spectral transforms between the (z,p), (z,r) and (k,p) lattices,
// plus the fine-r and half-cell-shift machinery used by the density-matrix
// chain. Kernels, orderings and measures: docs/conventions.md. All arrays
// stay in centered (monotone) index order; wrap order never escapes this
// module.

namespace zwitter::spectral {

// ---- in-place kernels on raw (n_z x n_p) complex arrays ----

/// (z,p) -> (z,r): G(z, r_c) = dp * sum_a exp(-i p_a r_c / hbar) F(z, p_a).
void p_to_r_inplace(CArray& v, const GridSpec& g);
/// Inverse of p_to_r_inplace.
void r_to_p_inplace(CArray& v, const GridSpec& g);
/// (z,p) -> (k,p): G(k_l, p) = dz * sum_j exp(-i k_l z_j) F(z_j, p).
void z_to_k_inplace(CArray& v, const GridSpec& g);
/// Inverse of z_to_k_inplace.
void k_to_z_inplace(CArray& v, const GridSpec& g);

/// Evaluate f at z + dir*dz/2 (dir = +-1) by exact band-limited shift.
void half_shift_z_inplace(CArray& v, const GridSpec& g, int dir);

/// p -> fine r transform with kernel exp(+i p r / hbar), evaluated on the
/// 2*n_p-point fine lattice r'_c = (c - n_p)*dz. Requires a square grid.
CArray fine_r_plus(const Array& f, const GridSpec& g);

// ---- wrapped representation changes ----

ComplexPhaseField to_r_representation(const RealPhaseField& f);
ComplexPhaseField to_r_representation(const ComplexPhaseField& f);
ComplexPhaseField to_k_representation(const RealPhaseField& f);
ComplexPhaseField to_k_representation(const ComplexPhaseField& f);
/// Back to (z,p) from either dual representation.
ComplexPhaseField to_zp_representation(const ComplexPhaseField& f);

// ---- 1D transforms on the x-lattice (wave functions) ----

/// psi_hat(k_l) = dz * sum_i exp(-i k_l x_i) psi(x_i).
CVector x_to_k(const CVector& psi, const GridSpec& g);
/// Inverse of x_to_k.
CVector k_to_x(const CVector& psi_k, const GridSpec& g);
/// Spectral d/dx.
CVector d_dx(const CVector& psi, const GridSpec& g);

/// Raw batched in-place FFT, centered order on both sides:
/// out_c = sum_a in_a * exp(-i * sign * 2 pi * (a - n/2)(c - n/2) / n).
/// Exposed for test oracles.
void centered_fft(Complex* data, int n, int howmany, int stride, int dist,
                  int sign);

}  // namespace zwitter::spectral
