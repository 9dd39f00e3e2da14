#pragma once

// Quantum-resource and complexity estimates: qubit counts for the full and
// marginalized PDF representations, quantum vs classical cost scaling for
// the causal linear system, and the dynamic-approach count.
//
// Conventions, fixed and documented: each encoded variable costs
// ceil(log2 n) qubits; polylog(G, 1/eps) is realized as
// log2(G) * log2(1/eps); costs are dimensionless model units
// (proportionality only, no absolute constant).

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace liou {

struct ProblemShape {
  std::uint64_t grid_sites = 1;  // G
  int fields = 1;                // F
  int connectivity = 1;          // z, site plus neighbors
  int levels = 2;                // n
};

struct CostQuery {
  int sparsity = 1;       // s
  double fidelity = 1.0;  // phi in (0, 1]
  double time_span = 1.0; // T
  double grid_size = 1.0; // G
  double epsilon = 0.5;   // tolerance in (0, 1)
};

inline int qubits_per_variable(int levels) {
  if (levels < 2) throw std::invalid_argument("levels must be >= 2");
  int q = 0;
  std::uint64_t capacity = 1;
  while (capacity < static_cast<std::uint64_t>(levels)) {
    capacity <<= 1;
    ++q;
  }
  return q;
}

inline void validate_shape(const ProblemShape& s) {
  if (s.grid_sites < 1 || s.fields < 1 || s.connectivity < 1 || s.levels < 2)
    throw std::invalid_argument("invalid problem shape");
  if (static_cast<std::uint64_t>(s.connectivity) > s.grid_sites)
    throw std::invalid_argument("connectivity exceeds grid size");
}

// q = G F ceil(log2 n); 64-bit throughout, safe for G ~ 1e9.
inline std::uint64_t qubits_full(const ProblemShape& shape) {
  validate_shape(shape);
  return shape.grid_sites * static_cast<std::uint64_t>(shape.fields) *
         qubits_per_variable(shape.levels);
}

// q = z F ceil(log2 n)
inline std::uint64_t qubits_marginal(const ProblemShape& shape) {
  validate_shape(shape);
  return static_cast<std::uint64_t>(shape.connectivity) *
         static_cast<std::uint64_t>(shape.fields) *
         qubits_per_variable(shape.levels);
}

// C_q = s phi T^2 log2(G) log2(1/eps), model units.
inline double cost_quantum(const CostQuery& q) {
  if (!(q.fidelity > 0.0) || q.fidelity > 1.0)
    throw std::invalid_argument("fidelity must be in (0, 1]");
  if (!(q.epsilon > 0.0) || !(q.epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in (0, 1)");
  if (q.sparsity < 1 || !(q.time_span > 0.0) || !(q.grid_size > 1.0))
    throw std::invalid_argument("invalid cost query");
  return q.sparsity * q.fidelity * q.time_span * q.time_span *
         std::log2(q.grid_size) * std::log2(1.0 / q.epsilon);
}

// C_c = s T G, model units.
inline double cost_classical(int sparsity, double time_span, double grid_size) {
  if (sparsity < 1 || !(time_span > 0.0) || !(grid_size > 0.0))
    throw std::invalid_argument("invalid classical cost inputs");
  return sparsity * time_span * grid_size;
}

// q = ceil(log2 dof); dof taken as a real to admit counts like 1e24.
inline int dynamic_approach_qubits(double dof) {
  if (!(dof >= 1.0)) throw std::invalid_argument("dof must be >= 1");
  return static_cast<int>(std::ceil(std::log2(dof)));
}

}  // namespace liou
