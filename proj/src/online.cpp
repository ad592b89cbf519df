#include "alloclab/online.hpp"

#include <algorithm>
#include <cmath>

#include "alloclab/rng.hpp"

namespace alloclab::online {

EtaReport eta_of(const ParameterVector& w, const ParameterVector& w_star) {
  if (w.size() != w_star.size()) throw LengthMismatch("parameter vectors have different lengths");
  w.validate();
  w_star.validate();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.size(); ++i) {
    const double d = w.logw[i] - w_star.logw[i];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {std::exp(hi - lo)};
}

ParameterVector perturb_parameters(const ParameterVector& w, double eta_target,
                                   std::uint64_t seed) {
  if (!(eta_target >= 1.0)) throw Error("eta target must be at least 1");
  Rng rng(seed);
  const double half_range = 0.5 * std::log(eta_target);
  ParameterVector out = w;
  for (double& v : out.logw) v += rng.uniform(-half_range, half_range);
  return out;
}

StreamResult simulate_stream(const WeightMatrix& items, const TransformSpec& transform,
                             const ParameterVector& params) {
  StreamResult result{AssignmentMatrix(items.agents(), items.items()),
                      LoadVector(items.agents(), 0.0),
                      {}};
  result.trace.reserve(items.items());
  for (int j = 0; j < items.items(); ++j) {
    auto fractions = core::gp_fractions(items, j, transform, params);
    const auto values = items.column_values(j);
    const auto adm = items.column_admissible(j);
    double* col = result.assignment.column(j);
    for (int i = 0; i < items.agents(); ++i) {
      col[i] = fractions[i];
      if (adm[i]) result.loads[i] += fractions[i] * values[i];
    }
    result.trace.push_back({j, std::move(fractions)});
  }
  return result;
}

StreamResult simulate_stream(const WeightMatrix& items, double alpha,
                             const ParameterVector& params) {
  return simulate_stream(items, TransformSpec::exponent(alpha), params);
}

int RobustResult::max_phase_count() const {
  return *std::max_element(phase_count.begin(), phase_count.end());
}

RobustResult robust_minmax(const WeightMatrix& items, const ParameterVector& predicted,
                           double T, const TransformSpec& transform) {
  if (!(T > 0.0) || !std::isfinite(T)) throw NonPositiveT(T);
  if (predicted.size() != items.agents()) {
    throw LengthMismatch("prediction vector has wrong length");
  }
  predicted.validate();

  const int m = items.agents();
  RobustResult result{AssignmentMatrix(m, items.items()),
                      LoadVector(m, 0.0),
                      {},
                      std::vector<int>(m, 1),
                      predicted};
  LoadVector phase_load(m, 0.0);
  std::vector<int> phase_items(m, 0);

  for (int j = 0; j < items.items(); ++j) {
    auto fractions = core::gp_fractions(items, j, transform, result.final_params);
    const auto values = items.column_values(j);
    const auto adm = items.column_admissible(j);
    double* col = result.assignment.column(j);
    for (int i = 0; i < m; ++i) {
      col[i] = fractions[i];
      if (!adm[i]) continue;
      const double gain = fractions[i] * values[i];
      result.total_loads[i] += gain;
      phase_load[i] += gain;
      phase_items[i] += 1;
    }
    for (int i = 0; i < m; ++i) {
      if (phase_load[i] > 2.0 * T) {
        result.phase_log.push_back(
            {i, result.phase_count[i], phase_items[i], phase_load[i], true});
        phase_load[i] = 0.0;
        phase_items[i] = 0;
        result.phase_count[i] += 1;
        result.final_params.logw[i] -= std::log(2.0);
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    result.phase_log.push_back({i, result.phase_count[i], phase_items[i], phase_load[i], false});
  }
  return result;
}

}  // namespace alloclab::online
