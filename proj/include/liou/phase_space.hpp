#pragma once

// Discretized phase-space grids, density fields, marginalization and
// observable averages.
//
// Indexing convention (fixed): fields are flattened row-major with axis 0
// slowest, i.e. flat = ((i0*n + i1)*n + i2)... for M axes of n levels each.
// Values are cell masses (probability per cell, volume factor included), so
// marginalization is pure summation and mass conservation is exact up to
// floating-point summation order.

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace liou {

using Vector = Eigen::VectorXd;

struct PhaseGrid {
  int axes_count = 1;   // M
  int levels = 2;       // n, uniform across axes
  double u_min = 0.0;
  double u_max = 1.0;

  double du() const { return (u_max - u_min) / levels; }

  std::int64_t cell_count() const {
    std::int64_t c = 1;
    for (int a = 0; a < axes_count; ++a) c *= levels;
    return c;
  }

  // stride of axis a in the flattened index (axis 0 slowest)
  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int a = axis + 1; a < axes_count; ++a) s *= levels;
    return s;
  }

  double center(int level_index) const {
    return u_min + (level_index + 0.5) * du();
  }

  std::int64_t flatten(std::span<const int> idx) const {
    std::int64_t flat = 0;
    for (int a = 0; a < axes_count; ++a) flat = flat * levels + idx[a];
    return flat;
  }

  void unflatten(std::int64_t flat, std::span<int> idx) const {
    for (int a = axes_count - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % levels);
      flat /= levels;
    }
  }

  bool same_geometry(const PhaseGrid& o) const {
    return axes_count == o.axes_count && levels == o.levels &&
           u_min == o.u_min && u_max == o.u_max;
  }
};

inline PhaseGrid build_phase_grid(int axes, int levels, double u_min,
                                  double u_max) {
  if (axes < 1) throw std::invalid_argument("phase grid needs at least 1 axis");
  if (levels < 2)
    throw std::invalid_argument("phase grid needs at least 2 levels per axis");
  if (!(u_max > u_min))
    throw std::invalid_argument("phase grid extent must be positive");
  return PhaseGrid{axes, levels, u_min, u_max};
}

struct DensityField {
  PhaseGrid grid;
  Vector values;  // cell masses, length grid.cell_count()

  DensityField() = default;
  explicit DensityField(const PhaseGrid& g)
      : grid(g), values(Vector::Zero(g.cell_count())) {}
  DensityField(const PhaseGrid& g, Vector v) : grid(g), values(std::move(v)) {
    if (values.size() != g.cell_count())
      throw std::invalid_argument("density field size mismatch with grid");
  }
};

inline double total_mass(const DensityField& p) { return p.values.sum(); }

// Sum out every axis not listed in keep_axes. keep_axes must be nonempty,
// strictly increasing and within [0, M).
inline DensityField marginalize(const DensityField& p,
                                std::span<const int> keep_axes) {
  const PhaseGrid& g = p.grid;
  if (keep_axes.empty())
    throw std::invalid_argument("marginalize: keep_axes must be nonempty");
  for (size_t k = 0; k < keep_axes.size(); ++k) {
    if (keep_axes[k] < 0 || keep_axes[k] >= g.axes_count)
      throw std::invalid_argument("marginalize: axis index out of range");
    if (k > 0 && keep_axes[k] <= keep_axes[k - 1])
      throw std::invalid_argument("marginalize: keep_axes must be increasing");
  }

  PhaseGrid out_grid = g;
  out_grid.axes_count = static_cast<int>(keep_axes.size());
  DensityField out(out_grid);

  std::vector<int> idx(g.axes_count);
  const std::int64_t total = g.cell_count();
  for (std::int64_t flat = 0; flat < total; ++flat) {
    g.unflatten(flat, idx);
    std::int64_t out_flat = 0;
    for (int a : keep_axes) out_flat = out_flat * g.levels + idx[a];
    out.values[out_flat] += p.values[flat];
  }
  return out;
}

struct ObservableSpec {
  enum class Kind { axis_mean, axis_moment, kinetic_energy };
  Kind kind = Kind::axis_mean;
  int axis = 0;    // for axis_mean / axis_moment
  int order = 1;   // for axis_moment
  bool normalize = true;
};

inline double average(const DensityField& p, const ObservableSpec& obs) {
  const PhaseGrid& g = p.grid;
  if (obs.kind == ObservableSpec::Kind::axis_moment && obs.order < 1)
    throw std::invalid_argument("axis_moment order must be >= 1");
  if (obs.kind != ObservableSpec::Kind::kinetic_energy &&
      (obs.axis < 0 || obs.axis >= g.axes_count))
    throw std::invalid_argument("observable axis out of range");

  double raw = 0.0;
  std::vector<int> idx(g.axes_count);
  const std::int64_t total = g.cell_count();
  for (std::int64_t flat = 0; flat < total; ++flat) {
    const double m = p.values[flat];
    if (m == 0.0) continue;
    g.unflatten(flat, idx);
    switch (obs.kind) {
      case ObservableSpec::Kind::axis_mean:
        raw += g.center(idx[obs.axis]) * m;
        break;
      case ObservableSpec::Kind::axis_moment: {
        double c = g.center(idx[obs.axis]);
        double t = 1.0;
        for (int k = 0; k < obs.order; ++k) t *= c;
        raw += t * m;
        break;
      }
      case ObservableSpec::Kind::kinetic_energy: {
        double k = 0.0;
        for (int a = 0; a < g.axes_count; ++a) {
          double c = g.center(idx[a]);
          k += c * c;
        }
        raw += k * m;
        break;
      }
    }
  }
  if (!obs.normalize) return raw;
  const double z = total_mass(p);
  if (!(z > 0.0)) throw std::invalid_argument("empty distribution");
  return raw / z;
}

}  // namespace liou
