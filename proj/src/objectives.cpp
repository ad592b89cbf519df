#include "alloclab/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "alloclab/rng.hpp"

namespace alloclab::objectives {

ObjectiveSpec ObjectiveSpec::lp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("lp norm order must satisfy p >= 1");
  return {ObjectiveKind::LpNorm, Direction::MinMax, p, {}};
}

ObjectiveSpec ObjectiveSpec::custom(std::function<double(const LoadVector&)> fn,
                                    Direction direction) {
  return {ObjectiveKind::Custom, direction, 2.0, std::move(fn)};
}

std::string ObjectiveSpec::name() const {
  switch (kind) {
    case ObjectiveKind::MinMax:
      return "minmax";
    case ObjectiveKind::MaxMin:
      return "maxmin";
    case ObjectiveKind::NashWelfare:
      return "nash";
    case ObjectiveKind::LpNorm:
      return "lp:" + std::to_string(p);
    case ObjectiveKind::Custom:
      return "custom";
  }
  return "unknown";
}

double evaluate(const ObjectiveSpec& objective, const LoadVector& loads) {
  if (loads.empty()) throw Error("empty load vector");
  switch (objective.kind) {
    case ObjectiveKind::MinMax:
      return *std::max_element(loads.begin(), loads.end());
    case ObjectiveKind::MaxMin:
      return *std::min_element(loads.begin(), loads.end());
    case ObjectiveKind::NashWelfare: {
      double log_sum = 0.0;
      for (double l : loads) {
        if (!(l > 0.0)) throw NonPositiveLoad("nash welfare needs strictly positive loads");
        log_sum += std::log(l);
      }
      return std::exp(log_sum / static_cast<double>(loads.size()));
    }
    case ObjectiveKind::LpNorm: {
      double sum = 0.0;
      for (double l : loads) sum += std::pow(l, objective.p);
      return std::pow(sum, 1.0 / objective.p);
    }
    case ObjectiveKind::Custom:
      return objective.fn(loads);
  }
  throw Error("unreachable objective kind");
}

WellBehavedReport check_well_behaved(const ObjectiveSpec& objective, int probe_count,
                                     std::uint64_t seed) {
  if (probe_count < 1) throw Error("probe count must be at least 1");
  WellBehavedReport report;
  Rng rng(seed);
  constexpr double kRelTol = 1e-9;
  const int m = 4;

  for (int probe = 0; probe < probe_count; ++probe) {
    LoadVector lower(m), upper(m);
    for (int i = 0; i < m; ++i) {
      lower[i] = rng.uniform(0.1, 10.0);
      upper[i] = lower[i] + rng.uniform(0.0, 5.0);
    }
    const double f_upper = evaluate(objective, upper);
    const double f_lower = evaluate(objective, lower);
    const double mono_scale = std::max({1.0, std::abs(f_upper), std::abs(f_lower)});
    if (f_upper < f_lower - kRelTol * mono_scale) {
      report.monotone_ok = false;
      if (report.counterexamples.size() < 8) {
        report.counterexamples.push_back({"monotone", upper, lower, 1.0, f_upper, f_lower});
      }
    }

    const double c = rng.uniform(0.1, 10.0);
    LoadVector scaled(m);
    for (int i = 0; i < m; ++i) scaled[i] = c * lower[i];
    const double f_scaled = evaluate(objective, scaled);
    const double expected = c * f_lower;
    const double homo_scale = std::max({1.0, std::abs(f_scaled), std::abs(expected)});
    if (std::abs(f_scaled - expected) > kRelTol * homo_scale) {
      report.homogeneous_ok = false;
      if (report.counterexamples.size() < 8) {
        report.counterexamples.push_back({"homogeneous", lower, scaled, c, f_scaled, expected});
      }
    }
  }
  return report;
}

ParameterVector ScaledInstance::transform_params(const ParameterVector& w_tilde) const {
  if (w_tilde.size() != static_cast<int>(log_s.size())) {
    throw LengthMismatch("parameter vector and scaling vector sizes differ");
  }
  ParameterVector out = w_tilde;
  for (std::size_t i = 0; i < log_s.size(); ++i) out.logw[i] -= alpha * log_s[i];
  return out;
}

ScaledInstance reduce_general(const WeightMatrix& P, const ScalingVector& s, double alpha) {
  if (static_cast<int>(s.s.size()) != P.agents()) {
    throw LengthMismatch("scaling vector has wrong length");
  }
  for (double v : s.s) {
    if (!(v > 0.0) || !std::isfinite(v)) throw BadScaling("scaling entries must be positive");
  }
  ScaledInstance out{WeightMatrix(P.agents(), P.items()), alpha, {}};
  out.log_s.resize(s.s.size());
  for (std::size_t i = 0; i < s.s.size(); ++i) out.log_s[i] = std::log(s.s[i]);
  for (int j = 0; j < P.items(); ++j) {
    for (int i = 0; i < P.agents(); ++i) {
      if (P.admissible(i, j)) {
        out.q.set(i, j, P.at(i, j) / s.s[i]);
      } else {
        out.q.set_inadmissible(i, j);
      }
    }
  }
  return out;
}

}  // namespace alloclab::objectives
