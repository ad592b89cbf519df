#include "alloclab/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "alloclab/parallel.hpp"

namespace alloclab::core {

namespace {

// Shared kernel: log-domain scores, max-subtraction, normalized exponential.
bool fractions_from_scores(std::span<const double> values, std::span<const std::uint8_t> adm,
                           const TransformSpec& transform, const ParameterVector& params,
                           double* out) {
  const int m = static_cast<int>(values.size());
  double max_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    if (!adm[i]) {
      out[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    out[i] = transform.log_apply(values[i]) + params.logw[i];
    max_score = std::max(max_score, out[i]);
  }
  if (!std::isfinite(max_score)) return false;

  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    out[i] = adm[i] ? std::exp(out[i] - max_score) : 0.0;
    total += out[i];
  }
  for (int i = 0; i < m; ++i) out[i] /= total;
  return true;
}

}  // namespace

std::vector<double> gp_fractions(const WeightColumn& column, const TransformSpec& transform,
                                 const ParameterVector& params) {
  if (column.size() != params.size()) {
    throw LengthMismatch("column and parameter vector sizes differ");
  }
  std::vector<double> out(column.size());
  if (!fractions_from_scores(column.values, column.admissible, transform, params, out.data())) {
    throw AllInadmissible(0);
  }
  return out;
}

std::vector<double> gp_fractions(const WeightMatrix& P, int j, const TransformSpec& transform,
                                 const ParameterVector& params) {
  return gp_fractions(column_of(P, j), transform, params);
}

std::vector<double> ep_fractions(const WeightColumn& column, double alpha,
                                 const ParameterVector& params) {
  return gp_fractions(column, TransformSpec::exponent(alpha), params);
}

LoadVector loads(const WeightMatrix& P, const AssignmentMatrix& X) {
  if (P.agents() != X.agents() || P.items() != X.items()) {
    throw ShapeMismatch("weight and assignment shapes differ");
  }
  LoadVector ell(P.agents(), 0.0);
  for (int j = 0; j < P.items(); ++j) {
    const double* x = X.column(j);
    const auto values = P.column_values(j);
    const auto adm = P.column_admissible(j);
    for (int i = 0; i < P.agents(); ++i) {
      if (adm[i]) ell[i] += x[i] * values[i];
    }
  }
  return ell;
}

namespace detail {

bool gp_fractions_into(const WeightMatrix& P, int j, const TransformSpec& transform,
                       const ParameterVector& params, double* out) {
  return fractions_from_scores(P.column_values(j), P.column_admissible(j), transform, params, out);
}

}  // namespace detail

namespace {

Allocation allocate_impl(const WeightMatrix& P, const TransformSpec& transform,
                         const ParameterVector& params, bool parallel) {
  if (P.agents() != params.size()) {
    throw LengthMismatch("weight matrix and parameter vector sizes differ");
  }
  Allocation result{AssignmentMatrix(P.agents(), P.items()), LoadVector(P.agents(), 0.0)};

  const int n = P.items();
  std::atomic<int> failed_column{-1};
  std::exception_ptr error;
  // Each item writes only its own column; results are identical to the
  // serial loop for any thread count.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(parallel ? thread_cap() : 1)
#endif
  for (int j = 0; j < n; ++j) {
    try {
      if (!detail::gp_fractions_into(P, j, transform, params, result.assignment.column(j))) {
        int expected = -1;
        failed_column.compare_exchange_strong(expected, j);
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(alloclab_allocate_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  if (failed_column.load() >= 0) throw AllInadmissible(failed_column.load());

  // Fixed accumulation order over items keeps the loads deterministic.
  result.loads = loads(P, result.assignment);
  return result;
}

}  // namespace

Allocation allocate_all(const WeightMatrix& P, const TransformSpec& transform,
                        const ParameterVector& params) {
  return allocate_impl(P, transform, params, true);
}

Allocation allocate_all_serial(const WeightMatrix& P, const TransformSpec& transform,
                               const ParameterVector& params) {
  return allocate_impl(P, transform, params, false);
}

}  // namespace alloclab::core
