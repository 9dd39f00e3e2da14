#pragma once

// Block lower-triangular reformulation of explicit time marching:
// A p = q with identity diagonal blocks, -S = -(1 - L dt) subdiagonal
// blocks, and q carrying the single seed block p0. Forward substitution is
// the same computation as Euler marching; this module exists to make that
// equivalence, the sparsity count, and the residual testable.

#include "liou/liouville.hpp"
#include "liou/phase_space.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

namespace liou {

struct CausalSystem {
  std::int64_t slice_dim = 0;  // n^3
  int time_slices = 0;         // M_t; total blocks = M_t + 1
  SparseMatrix step;           // S = I - dt L
  DensityField seed;           // p0
  double dt = 0.0;

  std::int64_t dimension() const { return slice_dim * (time_slices + 1); }
};

struct SparsityReport {
  int s = 1;                       // max nonzeros per row of A
  std::int64_t total_nonzeros = 0;
  std::int64_t dimension = 0;
};

inline CausalSystem build_causal_system(const FluxOperator& L, double dt,
                                        int time_slices,
                                        const DensityField& p0) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (time_slices < 1) throw std::invalid_argument("need at least one slice");
  if (!p0.grid.same_geometry(L.grid))
    throw std::invalid_argument("seed field grid does not match operator");

  CausalSystem sys;
  sys.slice_dim = L.grid.cell_count();
  sys.time_slices = time_slices;
  sys.seed = p0;
  sys.dt = dt;

  SparseMatrix identity(sys.slice_dim, sys.slice_dim);
  identity.setIdentity();
  sys.step = identity - dt * L.combined;
  sys.step.prune(0.0, 0.0);  // drop explicit zeros so sparsity counts are honest
  sys.step.makeCompressed();
  return sys;
}

inline std::vector<DensityField> forward_solve(const CausalSystem& sys) {
  std::vector<DensityField> slices;
  slices.reserve(sys.time_slices + 1);
  slices.push_back(sys.seed);
  for (int m = 0; m < sys.time_slices; ++m) {
    Vector next = sys.step * slices.back().values;
    for (std::int64_t i = 0; i < next.size(); ++i)
      if (!std::isfinite(next[i]))
        throw std::runtime_error("non-finite value at slice " +
                                 std::to_string(m + 1));
    slices.emplace_back(sys.seed.grid, std::move(next));
  }
  return slices;
}

// Max block-row residual of A p - q in the infinity norm, computed by
// explicit block multiplication.
inline double residual(const CausalSystem& sys,
                       const std::vector<DensityField>& slices) {
  if (static_cast<int>(slices.size()) != sys.time_slices + 1)
    throw std::invalid_argument("slice count does not match system");
  double r = (slices[0].values - sys.seed.values).lpNorm<Eigen::Infinity>();
  for (int m = 0; m < sys.time_slices; ++m) {
    const Vector block = slices[m + 1].values - sys.step * slices[m].values;
    r = std::max(r, block.lpNorm<Eigen::Infinity>());
  }
  return r;
}

inline SparsityReport sparsity_report(const CausalSystem& sys) {
  SparsityReport rep;
  rep.dimension = sys.dimension();
  // diagonal identity blocks
  rep.total_nonzeros = sys.slice_dim * (sys.time_slices + 1);
  int max_step_row = 0;
  for (int i = 0; i < sys.step.outerSize(); ++i) {
    int nnz = 0;
    for (SparseMatrix::InnerIterator it(sys.step, i); it; ++it)
      if (it.value() != 0.0) ++nnz;
    max_step_row = std::max(max_step_row, nnz);
  }
  rep.total_nonzeros +=
      static_cast<std::int64_t>(sys.step.nonZeros()) * sys.time_slices;
  // rows after the first block carry the unit diagonal plus one -S row
  rep.s = std::max(1, 1 + max_step_row);
  return rep;
}

// Debug-mode dense view of the full system, restricted to small dimensions.
// Returns triplets (row, col, value) of A.
inline std::vector<Eigen::Triplet<double>> full_matrix_triplets(
    const CausalSystem& sys) {
  if (sys.dimension() > 5000)
    throw std::invalid_argument("full matrix export limited to dim <= 5000");
  std::vector<Eigen::Triplet<double>> trips;
  for (int b = 0; b <= sys.time_slices; ++b)
    for (std::int64_t i = 0; i < sys.slice_dim; ++i)
      trips.emplace_back(b * sys.slice_dim + i, b * sys.slice_dim + i, 1.0);
  for (int b = 0; b < sys.time_slices; ++b) {
    const std::int64_t row0 = (b + 1) * sys.slice_dim;
    const std::int64_t col0 = b * sys.slice_dim;
    for (int i = 0; i < sys.step.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(sys.step, i); it; ++it)
        if (it.value() != 0.0)
          trips.emplace_back(row0 + it.row(), col0 + it.col(), -it.value());
  }
  return trips;
}

// Coordinate-format text export: "row col value" per line, 17 significant
// digits.
inline void export_matrix(const CausalSystem& sys, const std::string& path) {
  auto trips = full_matrix_triplets(sys);
  std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
    return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << std::setprecision(17);
  for (const auto& t : trips)
    out << t.row() << " " << t.col() << " " << t.value() << "\n";
}

}  // namespace liou
