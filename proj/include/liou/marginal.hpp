#pragma once

// The 3-point marginalized Liouville-Burgers equation: effective-field
// closures over (u, v, w) and the conservative 3-D phase-space operator.
//
// With the triplet-periodic closure (the ring identification j-2 = j+1,
// j+2 = j-1) the 3-point equation coincides with the full N=3 Liouville
// equation, which is the exactness hook the validation suite leans on.

#include "liou/burgers.hpp"
#include "liou/liouville.hpp"
#include "liou/phase_space.hpp"

#include <functional>
#include <stdexcept>

namespace liou {

struct ClosureSpec {
  enum class Kind { triplet_periodic, mean_field };
  Kind kind = Kind::triplet_periodic;
  // mean_field only: normalized 1-point marginal used for exterior means
  DensityField p1;
};

struct EffectiveField {
  // speeds on the three axes as functions of the cell center (u, v, w)
  std::function<double(double u, double v, double w)> A_u, A_v, A_w;

  PhaseVelocityField as_velocity_field(const PhaseGrid& grid,
                                       double diffusion = 0.0) const {
    auto au = A_u;
    auto av = A_v;
    auto aw = A_w;
    PhaseVelocityField vel;
    vel.diffusion = diffusion;
    vel.speed = [grid, au, av, aw](int axis, std::span<const int> idx) {
      const double u = grid.center(idx[0]);
      const double v = grid.center(idx[1]);
      const double w = grid.center(idx[2]);
      switch (axis) {
        case 0: return au(u, v, w);
        case 1: return av(u, v, w);
        default: return aw(u, v, w);
      }
    };
    return vel;
  }
};

// Phase-space advection speeds for the three retained sites. Triplet-periodic
// wires the sites into a 3-ring; mean_field replaces the exterior neighbor of
// the edge sites by the mean of the supplied 1-point marginal.
inline EffectiveField effective_field(const ClosureSpec& closure,
                                      const DynamicsSpec& spec) {
  EffectiveField field;
  if (closure.kind == ClosureSpec::Kind::triplet_periodic) {
    field.A_u = [spec](double u, double v, double w) {
      return rhs_site(w, u, v, spec);
    };
    field.A_v = [spec](double u, double v, double w) {
      return rhs_site(u, v, w, spec);
    };
    field.A_w = [spec](double u, double v, double w) {
      return rhs_site(v, w, u, spec);
    };
    return field;
  }

  if (closure.p1.grid.axes_count != 1)
    throw std::invalid_argument("mean_field closure needs a 1-axis marginal");
  if (!(total_mass(closure.p1) > 0.0))
    throw std::invalid_argument("mean_field closure needs nonzero-mass p1");
  const double mean =
      average(closure.p1, {ObservableSpec::Kind::axis_mean, 0, 1, true});

  field.A_u = [spec, mean](double u, double v, double /*w*/) {
    return rhs_site(mean, u, v, spec);
  };
  field.A_v = [spec](double u, double v, double w) {
    return rhs_site(u, v, w, spec);
  };
  field.A_w = [spec, mean](double /*u*/, double v, double w) {
    return rhs_site(v, w, mean, spec);
  };
  return field;
}

inline FluxOperator assemble_3pt_operator(const PhaseGrid& phase,
                                          const EffectiveField& field,
                                          double diffusion = 0.0) {
  if (phase.axes_count != 3)
    throw std::invalid_argument("3-point operator requires a 3-axis grid");
  return assemble_operator(phase, field.as_velocity_field(phase, diffusion));
}

inline EvolveResult evolve_3pt(const DensityField& p0, const FluxOperator& op,
                               double dt, int steps,
                               TimeMethod method = TimeMethod::euler) {
  return evolve(p0, op, dt, steps, method);
}

}  // namespace liou
