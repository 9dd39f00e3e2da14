#pragma once

// Conservative finite-volume transport of a density field in phase space:
// donor-cell upwind advection, central diffusion, no-flux boundaries.
//
// The assembled operator L follows the sign convention of the marching
// relation p^{t+1} = (1 - L dt) p^t, i.e. dp/dt = -L p. Fluxes are written
// in mass form (cell values carry the volume factor), so column sums of L
// vanish and total mass is conserved to summation order.

#include "liou/phase_space.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace liou {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct PhaseVelocityField {
  // advection speed on axis `axis` at the cell with the given multi-index
  std::function<double(int axis, std::span<const int> idx)> speed;
  double diffusion = 0.0;  // constant D >= 0
};

struct FluxOperator {
  PhaseGrid grid;
  std::vector<SparseMatrix> per_axis;  // one flux matrix per axis
  SparseMatrix combined;               // L = sum of per-axis matrices
  std::vector<double> max_abs_speed_sum;  // per cell, for CFL control
  double diffusion = 0.0;
};

// Donor-cell advective plus central diffusive fluxes at interior faces,
// face speed = mean of the adjacent cell-center speeds, boundary faces
// carry exactly zero flux.
inline FluxOperator assemble_operator(const PhaseGrid& phase,
                                      const PhaseVelocityField& vel) {
  const std::int64_t cells = phase.cell_count();
  const double du = phase.du();
  const double D = vel.diffusion;
  if (D < 0.0) throw std::invalid_argument("diffusion must be >= 0");

  FluxOperator op;
  op.grid = phase;
  op.diffusion = D;
  op.max_abs_speed_sum.assign(cells, 0.0);
  op.per_axis.reserve(phase.axes_count);

  std::vector<int> idx(phase.axes_count);
  std::vector<double> speed(cells);

  for (int axis = 0; axis < phase.axes_count; ++axis) {
    for (std::int64_t c = 0; c < cells; ++c) {
      phase.unflatten(c, idx);
      const double s = vel.speed(axis, idx);
      if (!std::isfinite(s))
        throw std::invalid_argument("non-finite speed on axis " +
                                    std::to_string(axis) + " at cell " +
                                    std::to_string(c));
      speed[c] = s;
      op.max_abs_speed_sum[c] += std::abs(s);
    }

    const std::int64_t stride = phase.stride(axis);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * cells);
    for (std::int64_t c = 0; c < cells; ++c) {
      phase.unflatten(c, idx);
      if (idx[axis] == phase.levels - 1) continue;  // no face to the right
      const std::int64_t left = c;
      const std::int64_t right = c + stride;
      const double a = 0.5 * (speed[left] + speed[right]);
      const double ap = std::max(a, 0.0) / du;
      const double am = std::min(a, 0.0) / du;
      const double d = D / (du * du);
      // flux L->R: ap*m_L + am*m_R + d*(m_L - m_R); dm_L/dt -= flux,
      // dm_R/dt += flux; stored with the dp/dt = -L p sign flip. Exact
      // zeros are skipped so the stored pattern matches the true stencil.
      if (ap + d != 0.0) {
        trips.emplace_back(left, left, ap + d);
        trips.emplace_back(right, left, -(ap + d));
      }
      if (am - d != 0.0) {
        trips.emplace_back(left, right, am - d);
        trips.emplace_back(right, right, -(am - d));
      }
    }
    SparseMatrix m(cells, cells);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    op.per_axis.push_back(std::move(m));
  }

  op.combined = op.per_axis[0];
  for (int axis = 1; axis < phase.axes_count; ++axis)
    op.combined += op.per_axis[axis];
  op.combined.makeCompressed();
  return op;
}

// CFL bound: cfl*du / max_cells sum_axes |speed|, tightened by the
// diffusion limit cfl*du^2 / (2 M D) when D > 0. Returns +inf when both
// advection and diffusion vanish.
inline double max_stable_dt(const FluxOperator& op, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0)
    throw std::invalid_argument("cfl must be in (0, 1]");
  const double du = op.grid.du();
  double max_speed = 0.0;
  for (double s : op.max_abs_speed_sum) max_speed = std::max(max_speed, s);

  double dt = std::numeric_limits<double>::infinity();
  if (max_speed > 0.0) dt = cfl * du / max_speed;
  if (op.diffusion > 0.0)
    dt = std::min(dt, cfl * du * du /
                          (2.0 * op.grid.axes_count * op.diffusion));
  return dt;
}

class PositivityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepDiagnostics {
  int step;
  double time;
  double mass;
  double min_value;
  double boundary_mass;
};

enum class TimeMethod { euler, rk2 };

struct EvolveResult {
  DensityField field;
  std::vector<StepDiagnostics> diagnostics;
};

inline std::vector<char> boundary_mask(const PhaseGrid& g) {
  std::vector<char> mask(g.cell_count(), 0);
  std::vector<int> idx(g.axes_count);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    g.unflatten(c, idx);
    for (int a = 0; a < g.axes_count; ++a)
      if (idx[a] == 0 || idx[a] == g.levels - 1) {
        mask[c] = 1;
        break;
      }
  }
  return mask;
}

inline EvolveResult evolve(const DensityField& p0, const FluxOperator& op,
                           double dt, int steps,
                           TimeMethod method = TimeMethod::euler) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (!p0.grid.same_geometry(op.grid))
    throw std::invalid_argument("field grid does not match operator grid");

  const std::vector<char> mask = boundary_mask(op.grid);
  auto record = [&](int step, const Vector& v) {
    double bmass = 0.0;
    for (std::int64_t c = 0; c < v.size(); ++c)
      if (mask[c]) bmass += v[c];
    return StepDiagnostics{step, step * dt, v.sum(), v.minCoeff(), bmass};
  };

  EvolveResult result;
  result.diagnostics.reserve(steps + 1);
  Vector m = p0.values;
  result.diagnostics.push_back(record(0, m));

  for (int s = 1; s <= steps; ++s) {
    if (method == TimeMethod::euler) {
      m -= dt * (op.combined * m);
    } else {
      const Vector k1 = -(op.combined * m);
      const Vector mid = m + 0.5 * dt * k1;
      m += dt * (-(op.combined * mid));
    }
    const double mn = m.minCoeff();
    if (mn < -1e-12)
      throw PositivityViolation("positivity violated at step " +
                                std::to_string(s) + ", min value " +
                                std::to_string(mn));
    result.diagnostics.push_back(record(s, m));
  }
  result.field = DensityField(op.grid, std::move(m));
  return result;
}

}  // namespace liou
