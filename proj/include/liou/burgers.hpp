#pragma once

// Discretized Burgers right-hand sides on a 1-D spatial grid.
//
// Two schemes are provided. `paper_matrix` evaluates the tridiagonal
// state-dependent coefficient rows (nu - u/4, -2nu - u/4, nu + u/4) exactly
// as written: its rows carry 1/4 factors and do not annihilate constant
// states. `consistent_central` is the standard central difference
// -u du/dx + nu d2u/dx2 with the 1/2 factor, conserves sum(u) under
// periodic boundaries, and is the default for validation runs. Both ship;
// tests name which one they use.

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace liou {

struct SpatialGrid {
  int sites = 2;          // N
  bool periodic = true;
  // dx is fixed at 1; the dx-parameterized central RHS below exists for
  // grid-refinement tests only.
  static constexpr double dx = 1.0;
};

enum class Scheme { paper_matrix, consistent_central };

struct DynamicsSpec {
  Scheme scheme = Scheme::consistent_central;
  double nu = 0.0;  // kinematic viscosity, >= 0
};

struct BurgersCoeffs {
  double b_minus, b_zero, b_plus;
};

// Tridiagonal row (B_{j,j-1}, B_{j,j}, B_{j,j+1}) of the state-dependent
// Burgers matrix.
inline BurgersCoeffs burgers_coeffs_paper(double u_center, double nu) {
  return {nu - 0.25 * u_center, -2.0 * nu - 0.25 * u_center,
          nu + 0.25 * u_center};
}

// Single-site RHS given the three-point neighborhood. This is the kernel
// shared by the spatial solver and the phase-space effective fields.
inline double rhs_site(double left, double center, double right,
                       const DynamicsSpec& spec) {
  if (spec.scheme == Scheme::paper_matrix) {
    const BurgersCoeffs b = burgers_coeffs_paper(center, spec.nu);
    return b.b_minus * left + b.b_zero * center + b.b_plus * right;
  }
  return -center * 0.5 * (right - left) +
         spec.nu * (right - 2.0 * center + left);
}

// du/dt over the whole grid. Periodic wrap for j +/- 1, or zero-gradient
// ghost values at the ends otherwise.
inline Eigen::VectorXd rhs(const Eigen::VectorXd& state,
                           const DynamicsSpec& spec, const SpatialGrid& grid) {
  if (spec.nu < 0.0) throw std::invalid_argument("viscosity must be >= 0");
  const int n = grid.sites;
  if (state.size() != n)
    throw std::invalid_argument("state length does not match grid");
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    const double left =
        (j > 0) ? state[j - 1] : (grid.periodic ? state[n - 1] : state[0]);
    const double right =
        (j < n - 1) ? state[j + 1] : (grid.periodic ? state[0] : state[n - 1]);
    out[j] = rhs_site(left, state[j], right, spec);
  }
  return out;
}

// consistent_central with an explicit space step, for order-of-accuracy
// tests; dx = 1 recovers `rhs`.
inline Eigen::VectorXd rhs_central_dx(const Eigen::VectorXd& state, double nu,
                                      double dx, bool periodic = true) {
  const int n = static_cast<int>(state.size());
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    const double left =
        (j > 0) ? state[j - 1] : (periodic ? state[n - 1] : state[0]);
    const double right =
        (j < n - 1) ? state[j + 1] : (periodic ? state[0] : state[n - 1]);
    out[j] = -state[j] * (right - left) / (2.0 * dx) +
             nu * (right - 2.0 * state[j] + left) / (dx * dx);
  }
  return out;
}

// Classic fourth-order Runge-Kutta step of du/dt = rhs(u).
inline Eigen::VectorXd step_rk4(const Eigen::VectorXd& state,
                                const DynamicsSpec& spec,
                                const SpatialGrid& grid, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const Eigen::VectorXd k1 = rhs(state, spec, grid);
  const Eigen::VectorXd k2 = rhs(state + 0.5 * dt * k1, spec, grid);
  const Eigen::VectorXd k3 = rhs(state + 0.5 * dt * k2, spec, grid);
  const Eigen::VectorXd k4 = rhs(state + dt * k3, spec, grid);
  Eigen::VectorXd out =
      state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  for (int j = 0; j < out.size(); ++j) {
    if (!std::isfinite(out[j]))
      throw std::runtime_error("integration failure at site " +
                               std::to_string(j));
  }
  return out;
}

}  // namespace liou
