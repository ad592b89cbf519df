#pragma once

#include <optional>
#include <utility>

#include "alloclab/core.hpp"
#include "alloclab/types.hpp"

namespace alloclab::canonical {

// Snapshot of one iterate of the weight-update solver. lower_bound[i] and
// upper_bound[i] bracket agent i's load at the *next* iterate:
//   l'_i >= l_min / (1 - (l_i - l_min)/ptilde_i)
//   l'_i <= l_max / (1 + (l_max - l_i)/ptilde_i)
// with ptilde_i the admissible row sum of P.
struct IterationRecord {
  int iteration = 0;
  double ell_min = 0.0;
  double ell_max = 0.0;
  double ratio = 0.0;
  double min_fraction = 0.0;  // min x_{i,j} over admissible pairs
  LoadVector loads;
  std::vector<double> lower_bound;
  std::vector<double> upper_bound;
};

struct IterationDiagnostics {
  std::vector<IterationRecord> records;

  // Smallest allocation fraction seen over all recorded iterates.
  double min_fraction_floor() const;
};

struct NonFiniteLoad : Error {
  explicit NonFiniteLoad(int agent)
      : Error("agent " + std::to_string(agent) + " has zero or non-finite load") {}
};

struct MaxIterExceeded : Error {
  IterationDiagnostics diagnostics;
  int iterations = 0;
  double final_ratio = 0.0;
  MaxIterExceeded(IterationDiagnostics diag, int iters, double ratio)
      : Error("weight-update solver did not reach the target ratio within " +
              std::to_string(iters) + " iterations (ratio " + std::to_string(ratio) + ")"),
        diagnostics(std::move(diag)),
        iterations(iters),
        final_ratio(ratio) {}
};

struct CanonicalResult {
  ParameterVector params;  // normalized so logw[0] == 0
  double load = 0.0;       // common load at termination
  int iterations = 0;      // update steps performed
  double final_ratio = 0.0;
};

struct SolveOptions {
  double tol = 1e-9;  // terminate when ell_max/ell_min <= 1 + tol
  // 0 selects the default budget 200*m*(1 + log(initial ratio)).
  int max_iter = 0;
  // Start from these parameters instead of the all-ones vector.
  std::optional<ParameterVector> initial;
  bool record_diagnostics = true;
};

struct SolveOutput {
  CanonicalResult result;
  IterationDiagnostics diagnostics;
};

// One step of the iterative weight update: returns the updated parameters
// (new logw_i = logw_i - log l_i + log gamma, gamma = l_1) and the loads the
// update was computed from.
std::pair<ParameterVector, LoadVector> iteration_step(const WeightMatrix& P,
                                                      const TransformSpec& transform,
                                                      const ParameterVector& params);

// Iterates until the max/min load ratio falls below 1 + tol. Throws
// MaxIterExceeded (with diagnostics) when the budget runs out first.
SolveOutput solve_canonical(const WeightMatrix& P, const TransformSpec& transform,
                            const SolveOptions& options = {});

// Canonical load per exponent. Values are solved independently (in parallel)
// unless warm_start chains them in order.
std::vector<std::pair<double, double>> canonical_sweep(const WeightMatrix& P,
                                                       const std::vector<double>& alphas,
                                                       double tol, bool warm_start = false,
                                                       int max_iter = 0);

// Exponent magnitude (2m/eps) * ln(m/eps) / (-ln(1-eps)); positive for
// Direction::MaxMin, negated for Direction::MinMax.
double choose_alpha(int m, double eps, Direction direction);

}  // namespace alloclab::canonical
