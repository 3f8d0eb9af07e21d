#include "zwitter/core.hpp"

#include <sstream>

namespace zwitter {

GridSpec make_grid(int n_z, int n_p, Real z_extent, Real p_extent, Real hbar,
                   Real mass) {
  auto fail = [](const std::string& msg) {
    throw InvalidDimensionsError("invalid-dimensions: " + msg);
  };
  if (n_z < 8 || n_z % 2 != 0)
    fail("n_z must be even and >= 8, got " + std::to_string(n_z));
  if (n_p < 8 || n_p % 2 != 0)
    fail("n_p must be even and >= 8, got " + std::to_string(n_p));
  if (!(z_extent > 0)) fail("z_extent must be > 0");
  if (!(p_extent > 0)) fail("p_extent must be > 0");
  if (!(hbar > 0)) fail("hbar must be > 0");
  if (!(mass > 0)) fail("mass must be > 0");

  GridSpec g{n_z, n_p, z_extent, p_extent, hbar, mass};
  // Wigner duality dr == 2 dz, exact up to rounding.
  const Real want = admissible_p_extent(n_z, z_extent, hbar);
  if (std::abs(p_extent - want) > 1e-9 * want) {
    std::ostringstream os;
    os << "dr = 2*dz violated: p_extent = " << p_extent
       << " but the duality relations require p_extent = pi*hbar*n_z/z_extent"
          " = "
       << want;
    fail(os.str());
  }
  return g;
}

GridSpec make_wigner_grid(int n_z, int n_p, Real z_extent, Real hbar,
                          Real mass) {
  return make_grid(n_z, n_p, z_extent, admissible_p_extent(n_z, z_extent, hbar),
                   hbar, mass);
}

Real boundary_mass(const RealPhaseField& w, int cells) {
  const int nz = w.grid.n_z, np = w.grid.n_p;
  Real m = 0;
  for (int j = 0; j < nz; ++j)
    for (int a = 0; a < np; ++a)
      if (j < cells || j >= nz - cells || a < cells || a >= np - cells)
        m += w.values(j, a);
  return m * w.grid.cell_measure();
}

}  // namespace zwitter
