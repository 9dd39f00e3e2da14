#pragma once

// Monte-Carlo ensemble simulator: trajectory bundles under perturbed
// initial conditions, empirical PDFs and moments. This module is the
// ground-truth oracle the phase-space solvers are validated against.
//
// Sampling uses counter-based substreams keyed by (seed, realization), so
// results are bit-identical regardless of how realizations are scheduled.

#include "liou/burgers.hpp"
#include "liou/phase_space.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace liou {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic substream: the state is a hash of (seed, stream index),
// draws are sequential splitmix64 outputs.
class SubStream {
 public:
  SubStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    state_ = detail::splitmix64(s) ^ (stream * 0xda942042e4dd58b5ULL);
    // burn one output to decorrelate adjacent streams
    detail::splitmix64(state_);
  }

  // uniform in (0, 1)
  double uniform01() {
    const std::uint64_t bits = detail::splitmix64(state_);
    return ((bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double half_width) {
    return half_width * (2.0 * uniform01() - 1.0);
  }

  // Box-Muller; one draw per call, the spare is kept.
  double gaussian(double sigma) {
    if (have_spare_) {
      have_spare_ = false;
      return sigma * spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return sigma * r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct Perturbation {
  enum class Kind { gaussian, uniform };
  Kind kind = Kind::gaussian;
  double scale = 0.0;  // sigma or half_width
};

struct InitialEnsembleSpec {
  Eigen::VectorXd base_profile;
  Perturbation perturbation;
  int count = 1;  // R
  std::uint64_t seed = 0;
};

struct TrajectoryBundle {
  // states[r] holds (steps+1) x N, row s = state at time s*dt
  std::vector<Eigen::MatrixXd> states;
  double dt = 0.0;
  std::uint64_t seed = 0;
  DynamicsSpec dynamics;

  int realizations() const { return static_cast<int>(states.size()); }
  int slices() const {
    return states.empty() ? 0 : static_cast<int>(states[0].rows());
  }
};

struct HistogramMode {
  enum class Kind { snapshot, time_occupation };
  Kind kind = Kind::snapshot;
  int t_index = 0;  // snapshot slice
};

inline Eigen::MatrixXd sample_initial_conditions(const InitialEnsembleSpec& spec,
                                                 const SpatialGrid& grid) {
  if (spec.count < 1)
    throw std::invalid_argument("ensemble count must be >= 1");
  if (spec.base_profile.size() != grid.sites)
    throw std::invalid_argument("base profile length does not match grid");
  if (!(spec.perturbation.scale > 1e-100))
    throw std::invalid_argument("degenerate perturbation");

  Eigen::MatrixXd out(spec.count, grid.sites);
  for (int r = 0; r < spec.count; ++r) {
    SubStream rng(spec.seed, static_cast<std::uint64_t>(r));
    for (int j = 0; j < grid.sites; ++j) {
      const double d = spec.perturbation.kind == Perturbation::Kind::gaussian
                           ? rng.gaussian(spec.perturbation.scale)
                           : rng.uniform(spec.perturbation.scale);
      out(r, j) = spec.base_profile[j] + d;
    }
  }
  return out;
}

inline TrajectoryBundle run_ensemble(const Eigen::MatrixXd& init,
                                     const DynamicsSpec& spec,
                                     const SpatialGrid& grid, double dt,
                                     int steps, std::uint64_t seed = 0) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (init.cols() != grid.sites)
    throw std::invalid_argument("initial matrix width does not match grid");

  TrajectoryBundle bundle;
  bundle.dt = dt;
  bundle.seed = seed;
  bundle.dynamics = spec;
  bundle.states.reserve(init.rows());
  for (int r = 0; r < init.rows(); ++r) {
    Eigen::MatrixXd traj(steps + 1, grid.sites);
    Eigen::VectorXd u = init.row(r);
    traj.row(0) = u;
    for (int s = 1; s <= steps; ++s) {
      try {
        u = step_rk4(u, spec, grid, dt);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("realization " + std::to_string(r) + ": " +
                                 e.what());
      }
      traj.row(s) = u;
    }
    bundle.states.push_back(std::move(traj));
  }
  return bundle;
}

struct EmpiricalPdf {
  DensityField field;
  double out_of_range_fraction = 0.0;
};

// Histogram of selected site values on a phase grid. Snapshot mode bins one
// time slice across realizations; time_occupation weights every slice of
// every realization by 1/slices, so a trajectory's total contribution is
// dt/T summed over its visited cells. Out-of-range samples are dropped and
// their fraction reported; histogram mass + fraction = 1.
inline EmpiricalPdf empirical_pdf(const TrajectoryBundle& bundle,
                                  const PhaseGrid& phase,
                                  std::span<const int> axes,
                                  const HistogramMode& mode) {
  if (static_cast<int>(axes.size()) != phase.axes_count)
    throw std::invalid_argument("axes count does not match phase grid");
  const int R = bundle.realizations();
  const int S = bundle.slices();
  if (mode.kind == HistogramMode::Kind::snapshot &&
      (mode.t_index < 0 || mode.t_index >= S))
    throw std::invalid_argument("snapshot index out of range");

  EmpiricalPdf out{DensityField(phase), 0.0};
  const double du = phase.du();
  std::vector<int> idx(phase.axes_count);
  double dropped = 0.0;

  const int s_begin = mode.kind == HistogramMode::Kind::snapshot ? mode.t_index : 0;
  const int s_end = mode.kind == HistogramMode::Kind::snapshot ? mode.t_index + 1 : S;
  const double weight =
      mode.kind == HistogramMode::Kind::snapshot ? 1.0 / R : 1.0 / (R * double(S));

  for (int r = 0; r < R; ++r) {
    for (int s = s_begin; s < s_end; ++s) {
      bool in_range = true;
      for (int a = 0; a < phase.axes_count; ++a) {
        const double v = bundle.states[r](s, axes[a]);
        const int cell = static_cast<int>(std::floor((v - phase.u_min) / du));
        if (cell < 0 || cell >= phase.levels) {
          in_range = false;
          break;
        }
        idx[a] = cell;
      }
      if (in_range)
        out.field.values[phase.flatten(idx)] += weight;
      else
        dropped += weight;
    }
  }
  out.out_of_range_fraction = dropped;
  return out;
}

}  // namespace liou
