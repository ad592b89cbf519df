#include "alloclab/canonical.hpp"

#include <algorithm>
#include <cmath>

#include "alloclab/parallel.hpp"

namespace alloclab::canonical {

namespace {

double min_admissible_fraction(const WeightMatrix& P, const AssignmentMatrix& X) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < P.items(); ++j) {
    const double* x = X.column(j);
    const auto adm = P.column_admissible(j);
    for (int i = 0; i < P.agents(); ++i) {
      if (adm[i]) best = std::min(best, x[i]);
    }
  }
  return best;
}

IterationRecord make_record(int iteration, const WeightMatrix& P, const core::Allocation& alloc,
                            const std::vector<double>& row_sums, double ell_min, double ell_max) {
  IterationRecord rec;
  rec.iteration = iteration;
  rec.ell_min = ell_min;
  rec.ell_max = ell_max;
  rec.ratio = ell_max / ell_min;
  rec.min_fraction = min_admissible_fraction(P, alloc.assignment);
  rec.loads = alloc.loads;
  rec.lower_bound.resize(P.agents());
  rec.upper_bound.resize(P.agents());
  for (int i = 0; i < P.agents(); ++i) {
    const double li = alloc.loads[i];
    rec.lower_bound[i] = ell_min / (1.0 - (li - ell_min) / row_sums[i]);
    rec.upper_bound[i] = ell_max / (1.0 + (ell_max - li) / row_sums[i]);
  }
  return rec;
}

// logw_i <- logw_i - log(l_i) + log(gamma), gamma = l_1.
void apply_update(ParameterVector& params, const LoadVector& ell) {
  const double log_gamma = std::log(ell.front());
  for (std::size_t i = 0; i < ell.size(); ++i) {
    if (!(ell[i] > 0.0) || !std::isfinite(ell[i])) {
      throw NonFiniteLoad(static_cast<int>(i));
    }
    params.logw[i] += log_gamma - std::log(ell[i]);
  }
}

int default_budget(int m, double initial_ratio) {
  const double lg = std::log(std::max(initial_ratio, 1.0));
  return static_cast<int>(std::ceil(200.0 * m * (1.0 + lg)));
}

}  // namespace

double IterationDiagnostics::min_fraction_floor() const {
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& rec : records) floor = std::min(floor, rec.min_fraction);
  return floor;
}

std::pair<ParameterVector, LoadVector> iteration_step(const WeightMatrix& P,
                                                      const TransformSpec& transform,
                                                      const ParameterVector& params) {
  params.validate();
  auto alloc = core::allocate_all(P, transform, params);
  ParameterVector next = params;
  apply_update(next, alloc.loads);
  return {std::move(next), std::move(alloc.loads)};
}

SolveOutput solve_canonical(const WeightMatrix& P, const TransformSpec& transform,
                            const SolveOptions& options) {
  if (!(options.tol > 0.0) || options.tol > 0.1) {
    throw Error("solver tolerance must lie in (0, 0.1]");
  }
  ParameterVector w = options.initial.value_or(ParameterVector::ones(P.agents()));
  if (w.size() != P.agents()) throw LengthMismatch("initial parameters have wrong length");
  w.validate();

  std::vector<double> row_sums(P.agents());
  for (int i = 0; i < P.agents(); ++i) row_sums[i] = P.row_sum(i);

  SolveOutput out;
  auto alloc = core::allocate_all(P, transform, w);
  int max_iter = options.max_iter;

  for (int it = 0;; ++it) {
    const auto [lo_it, hi_it] = std::minmax_element(alloc.loads.begin(), alloc.loads.end());
    const double ell_min = *lo_it;
    const double ell_max = *hi_it;
    if (!(ell_min > 0.0) || !std::isfinite(ell_max)) {
      throw NonFiniteLoad(static_cast<int>(lo_it - alloc.loads.begin()));
    }
    if (options.record_diagnostics) {
      out.diagnostics.records.push_back(make_record(it, P, alloc, row_sums, ell_min, ell_max));
    }
    if (it == 0 && max_iter <= 0) max_iter = default_budget(P.agents(), ell_max / ell_min);

    if (ell_max <= (1.0 + options.tol) * ell_min) {
      out.result.params = w.normalized();
      out.result.load = ell_max;
      out.result.iterations = it;
      out.result.final_ratio = ell_max / ell_min;
      return out;
    }
    if (it >= max_iter) {
      throw MaxIterExceeded(std::move(out.diagnostics), it, ell_max / ell_min);
    }
    apply_update(w, alloc.loads);
    alloc = core::allocate_all(P, transform, w);
  }
}

std::vector<std::pair<double, double>> canonical_sweep(const WeightMatrix& P,
                                                       const std::vector<double>& alphas,
                                                       double tol, bool warm_start, int max_iter) {
  std::vector<std::pair<double, double>> out(alphas.size());

  if (warm_start) {
    SolveOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    options.record_diagnostics = false;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      auto solved = solve_canonical(P, TransformSpec::exponent(alphas[k]), options);
      out[k] = {alphas[k], solved.result.load};
      options.initial = solved.result.params;
    }
    return out;
  }

  std::exception_ptr error;
  const int count = static_cast<int>(alphas.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
#endif
  for (int k = 0; k < count; ++k) {
    try {
      SolveOptions options;
      options.tol = tol;
      options.max_iter = max_iter;
      options.record_diagnostics = false;
      auto solved = solve_canonical(P, TransformSpec::exponent(alphas[k]), options);
      out[k] = {alphas[k], solved.result.load};
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(alloclab_sweep_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double choose_alpha(int m, double eps, Direction direction) {
  if (m < 1) throw Error("agent count must be at least 1");
  if (!(eps > 0.0) || !(eps < 1.0)) throw BadEpsilon(eps);
  const double magnitude = (2.0 * m / eps) * std::log(m / eps) / (-std::log1p(-eps));
  return direction == Direction::MaxMin ? magnitude : -magnitude;
}

}  // namespace alloclab::canonical
