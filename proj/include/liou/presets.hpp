#pragma once

// Ready-made initial fields and phase-space velocity fields shared by the
// CLI, the tests, and the acceptance suite.

#include "liou/burgers.hpp"
#include "liou/liouville.hpp"
#include "liou/phase_space.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace liou {

// Product of per-axis Gaussians, binned exactly via the error function and
// normalized to unit mass.
inline DensityField gaussian_product_field(const PhaseGrid& grid,
                                           std::span<const double> means,
                                           double sigma) {
  if (static_cast<int>(means.size()) != grid.axes_count)
    throw std::invalid_argument("means count does not match grid axes");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");

  const double du = grid.du();
  const double inv = 1.0 / (sigma * std::sqrt(2.0));
  // per-axis cell masses from CDF differences
  std::vector<std::vector<double>> axis_mass(grid.axes_count);
  for (int a = 0; a < grid.axes_count; ++a) {
    axis_mass[a].resize(grid.levels);
    for (int i = 0; i < grid.levels; ++i) {
      const double lo = grid.u_min + i * du;
      const double hi = lo + du;
      axis_mass[a][i] = 0.5 * (std::erf((hi - means[a]) * inv) -
                               std::erf((lo - means[a]) * inv));
    }
  }

  DensityField p(grid);
  std::vector<int> idx(grid.axes_count);
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
    grid.unflatten(c, idx);
    double m = 1.0;
    for (int a = 0; a < grid.axes_count; ++a) m *= axis_mass[a][idx[a]];
    p.values[c] = m;
  }
  const double z = total_mass(p);
  if (!(z > 0.0)) throw std::invalid_argument("gaussian field has zero mass");
  p.values /= z;
  return p;
}

// 2-D rigid rotation (u, v) -> (-v, u), divergence-free.
inline PhaseVelocityField rigid_rotation_field(const PhaseGrid& grid) {
  if (grid.axes_count != 2)
    throw std::invalid_argument("rigid rotation needs a 2-axis grid");
  PhaseVelocityField vel;
  vel.speed = [grid](int axis, std::span<const int> idx) {
    const double u = grid.center(idx[0]);
    const double v = grid.center(idx[1]);
    return axis == 0 ? -v : u;
  };
  return vel;
}

// Full N-site periodic Burgers phase-space velocity: the speed on axis j at
// a cell is the Burgers RHS at site j evaluated on the cell-center state.
inline PhaseVelocityField burgers_velocity_field(const PhaseGrid& grid,
                                                 const DynamicsSpec& spec,
                                                 double diffusion = 0.0) {
  PhaseVelocityField vel;
  vel.diffusion = diffusion;
  vel.speed = [grid, spec](int axis, std::span<const int> idx) {
    const int n = grid.axes_count;
    const double center = grid.center(idx[axis]);
    const double left = grid.center(idx[(axis + n - 1) % n]);
    const double right = grid.center(idx[(axis + 1) % n]);
    return rhs_site(left, center, right, spec);
  };
  return vel;
}

// Zero advection; pure diffusion when D > 0.
inline PhaseVelocityField zero_velocity_field(double diffusion = 0.0) {
  PhaseVelocityField vel;
  vel.diffusion = diffusion;
  vel.speed = [](int, std::span<const int>) { return 0.0; };
  return vel;
}

}  // namespace liou
