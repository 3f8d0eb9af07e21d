#include "zwitter/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace zwitter::spectral {

namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is. Plans
// are cached per geometry and per pointer alignment class so that
// fftw_execute_dft stays within its documented contract.
struct PlanKey {
  int n, howmany, stride, dist, sign, alignment;
  auto tie() const { return std::tie(n, howmany, stride, dist, sign, alignment); }
  bool operator<(const PlanKey& o) const { return tie() < o.tie(); }
};

fftw_plan plan_for(Complex* data, int n, int howmany, int stride, int dist,
                   int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  static std::mutex mtx;
  auto* ptr = reinterpret_cast<fftw_complex*>(data);
  PlanKey key{n, howmany, stride, dist, sign, fftw_alignment_of(reinterpret_cast<double*>(ptr))};
  std::lock_guard lock(mtx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_plan p = fftw_plan_many_dft(1, &n, howmany, ptr, nullptr, stride, dist,
                                   ptr, nullptr, stride, dist, sign,
                                   FFTW_ESTIMATE);
  if (!p) throw Error("fftw planning failed");
  cache.emplace(key, p);
  return p;
}

// Multiply slice index m (along the transform axis) by (-1)^m and an overall
// factor; axis 0 = rows of the sequences (z axis, contiguous), axis 1 = p.
void alternate_scale_axis_p(CArray& v, Real factor) {
  for (int a = 0; a < v.cols(); ++a)
    v.col(a) *= (a % 2 ? -factor : factor);
}
void alternate_scale_axis_z(CArray& v, Real factor) {
  for (int j = 0; j < v.rows(); ++j)
    v.row(j) *= (j % 2 ? -factor : factor);
}

Real sign0(int n_half) { return (n_half % 2) ? -1.0 : 1.0; }

}  // namespace

void centered_fft(Complex* data, int n, int howmany, int stride, int dist,
                  int sign) {
  // exp(-i s 2pi (a - n/2)(c - n/2)/n) =
  //   (-1)^{n/2} (-1)^a (-1)^c exp(-i s 2pi a c / n)
  const Real s0 = sign0(n / 2);
  for (int h = 0; h < howmany; ++h)
    for (int m = 1; m < n; m += 2) data[h * dist + m * stride] *= -1.0;
  fftw_execute_dft(plan_for(data, n, howmany, stride, dist,
                            sign > 0 ? FFTW_FORWARD : FFTW_BACKWARD),
                   reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  for (int h = 0; h < howmany; ++h)
    for (int m = 0; m < n; ++m)
      data[h * dist + m * stride] *= (m % 2 ? -s0 : s0);
}

void p_to_r_inplace(CArray& v, const GridSpec& g) {
  alternate_scale_axis_p(v, 1.0);
  fftw_execute_dft(
      plan_for(v.data(), g.n_p, g.n_z, g.n_z, 1, FFTW_FORWARD),
      reinterpret_cast<fftw_complex*>(v.data()),
      reinterpret_cast<fftw_complex*>(v.data()));
  alternate_scale_axis_p(v, g.dp() * sign0(g.n_p / 2));
}

void r_to_p_inplace(CArray& v, const GridSpec& g) {
  alternate_scale_axis_p(v, 1.0);
  fftw_execute_dft(
      plan_for(v.data(), g.n_p, g.n_z, g.n_z, 1, FFTW_BACKWARD),
      reinterpret_cast<fftw_complex*>(v.data()),
      reinterpret_cast<fftw_complex*>(v.data()));
  alternate_scale_axis_p(v, g.dr() / (2 * pi * g.hbar) * sign0(g.n_p / 2));
}

void z_to_k_inplace(CArray& v, const GridSpec& g) {
  alternate_scale_axis_z(v, 1.0);
  fftw_execute_dft(
      plan_for(v.data(), g.n_z, g.n_p, 1, g.n_z, FFTW_FORWARD),
      reinterpret_cast<fftw_complex*>(v.data()),
      reinterpret_cast<fftw_complex*>(v.data()));
  alternate_scale_axis_z(v, g.dz() * sign0(g.n_z / 2));
}

void k_to_z_inplace(CArray& v, const GridSpec& g) {
  alternate_scale_axis_z(v, 1.0);
  fftw_execute_dft(
      plan_for(v.data(), g.n_z, g.n_p, 1, g.n_z, FFTW_BACKWARD),
      reinterpret_cast<fftw_complex*>(v.data()),
      reinterpret_cast<fftw_complex*>(v.data()));
  alternate_scale_axis_z(v, g.dk() / (2 * pi) * sign0(g.n_z / 2));
}

void half_shift_z_inplace(CArray& v, const GridSpec& g, int dir) {
  z_to_k_inplace(v, g);
  for (int l = 0; l < g.n_z; ++l) {
    const Complex ph = std::polar(1.0, dir * g.k(l) * g.dz() / 2);
    v.row(l) *= ph;
  }
  k_to_z_inplace(v, g);
}

CArray fine_r_plus(const Array& f, const GridSpec& g) {
  if (!g.square())
    throw GridMismatchError("fine_r_plus: requires a square (n_p == n_z) grid");
  const int np = g.n_p;
  // Zero-pad to 2 n_p along p with the alternating pre-scale applied.
  CArray padded = CArray::Zero(g.n_z, 2 * np);
  for (int a = 0; a < np; ++a)
    padded.col(a) = f.col(a).cast<Complex>() * (a % 2 ? -1.0 : 1.0);
  fftw_execute_dft(
      plan_for(padded.data(), 2 * np, g.n_z, g.n_z, 1, FFTW_BACKWARD),
      reinterpret_cast<fftw_complex*>(padded.data()),
      reinterpret_cast<fftw_complex*>(padded.data()));
  // G+(z, r'_c) = dp * (-1)^{n_p/2} * (-i)^c * BFFT[pad]_c
  const Real s0 = sign0(np / 2) * g.dp();
  const Complex mi(0, -1);
  Complex tw = 1;
  for (int c = 0; c < 2 * np; ++c) {
    padded.col(c) *= s0 * tw;
    tw *= mi;
  }
  return padded;
}

namespace {
ComplexPhaseField as_complex(const RealPhaseField& f) {
  return {f.grid, Representation::ZP, f.values.cast<Complex>()};
}
}  // namespace

ComplexPhaseField to_r_representation(const RealPhaseField& f) {
  return to_r_representation(as_complex(f));
}
ComplexPhaseField to_r_representation(const ComplexPhaseField& f) {
  if (f.rep != Representation::ZP)
    throw GridMismatchError("to_r_representation: input must be in (z,p)");
  ComplexPhaseField out{f.grid, Representation::ZR, f.values};
  p_to_r_inplace(out.values, f.grid);
  return out;
}
ComplexPhaseField to_k_representation(const RealPhaseField& f) {
  return to_k_representation(as_complex(f));
}
ComplexPhaseField to_k_representation(const ComplexPhaseField& f) {
  if (f.rep != Representation::ZP)
    throw GridMismatchError("to_k_representation: input must be in (z,p)");
  ComplexPhaseField out{f.grid, Representation::KP, f.values};
  z_to_k_inplace(out.values, f.grid);
  return out;
}
ComplexPhaseField to_zp_representation(const ComplexPhaseField& f) {
  ComplexPhaseField out{f.grid, Representation::ZP, f.values};
  switch (f.rep) {
    case Representation::ZR:
      r_to_p_inplace(out.values, f.grid);
      break;
    case Representation::KP:
      k_to_z_inplace(out.values, f.grid);
      break;
    case Representation::ZP:
      break;
  }
  return out;
}

CVector x_to_k(const CVector& psi, const GridSpec& g) {
  if (psi.size() != g.n_z)
    throw GridMismatchError("x_to_k: size mismatch with x-lattice");
  CVector v = psi;
  centered_fft(v.data(), g.n_z, 1, 1, g.n_z, +1);
  return v * g.dz();
}

CVector k_to_x(const CVector& psi_k, const GridSpec& g) {
  if (psi_k.size() != g.n_z)
    throw GridMismatchError("k_to_x: size mismatch with k-lattice");
  CVector v = psi_k;
  centered_fft(v.data(), g.n_z, 1, 1, g.n_z, -1);
  return v * (g.dk() / (2 * pi));
}

CVector d_dx(const CVector& psi, const GridSpec& g) {
  CVector v = x_to_k(psi, g);
  for (int l = 0; l < g.n_z; ++l) v(l) *= Complex(0, g.k(l));
  return k_to_x(v, g);
}

}  // namespace zwitter::spectral
