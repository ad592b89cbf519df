#pragma once

#include "alloclab/types.hpp"

namespace alloclab::core {

// One item's weights together with its admissibility flags.
struct WeightColumn {
  std::span<const double> values;
  std::span<const std::uint8_t> admissible;

  int size() const { return static_cast<int>(values.size()); }
};

inline WeightColumn column_of(const WeightMatrix& P, int j) {
  return {P.column_values(j), P.column_admissible(j)};
}

// Proportional fractions x_i = f(p_i) w_i / sum_k f(p_k) w_k, evaluated as a
// log-domain normalized exponential (max-subtraction before exponentiation).
// Inadmissible agents receive 0. Throws AllInadmissible when nobody can take
// the item.
std::vector<double> gp_fractions(const WeightColumn& column, const TransformSpec& transform,
                                 const ParameterVector& params);

std::vector<double> gp_fractions(const WeightMatrix& P, int j, const TransformSpec& transform,
                                 const ParameterVector& params);

// gp_fractions with f(p) = p^alpha.
std::vector<double> ep_fractions(const WeightColumn& column, double alpha,
                                 const ParameterVector& params);

// Per-agent loads of an assignment; inadmissible entries contribute nothing.
LoadVector loads(const WeightMatrix& P, const AssignmentMatrix& X);

struct Allocation {
  AssignmentMatrix assignment;
  LoadVector loads;
};

// Column-wise proportional allocation of the whole matrix. The default entry
// point runs the item loop with OpenMP; the serial variant is the reference
// both are tested against and produces identical output.
Allocation allocate_all(const WeightMatrix& P, const TransformSpec& transform,
                        const ParameterVector& params);
Allocation allocate_all_serial(const WeightMatrix& P, const TransformSpec& transform,
                               const ParameterVector& params);

namespace detail {
// Writes the fractions of item j into out[0..m). Returns false when the
// column is fully inadmissible.
bool gp_fractions_into(const WeightMatrix& P, int j, const TransformSpec& transform,
                       const ParameterVector& params, double* out);
}  // namespace detail

}  // namespace alloclab::core
