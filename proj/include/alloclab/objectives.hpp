#pragma once

#include <functional>
#include <string>

#include "alloclab/types.hpp"

namespace alloclab::objectives {

struct NonPositiveLoad : Error {
  explicit NonPositiveLoad(const std::string& what) : Error(what) {}
};

struct BadScaling : Error {
  explicit BadScaling(const std::string& what) : Error(what) {}
};

enum class ObjectiveKind { MinMax, MaxMin, NashWelfare, LpNorm, Custom };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::MinMax;
  Direction direction = Direction::MinMax;
  double p = 2.0;  // LpNorm order
  std::function<double(const LoadVector&)> fn;  // Custom evaluator

  static ObjectiveSpec minmax() { return {ObjectiveKind::MinMax, Direction::MinMax, 2.0, {}}; }
  static ObjectiveSpec maxmin() { return {ObjectiveKind::MaxMin, Direction::MaxMin, 2.0, {}}; }
  static ObjectiveSpec nash() { return {ObjectiveKind::NashWelfare, Direction::MaxMin, 2.0, {}}; }
  static ObjectiveSpec lp(double p);
  static ObjectiveSpec custom(std::function<double(const LoadVector&)> fn, Direction direction);

  std::string name() const;
};

// MinMax -> max_i l_i; MaxMin -> min_i l_i; NashWelfare -> geometric mean;
// LpNorm -> (sum l_i^p)^(1/p). Nash welfare requires strictly positive loads.
double evaluate(const ObjectiveSpec& objective, const LoadVector& loads);

struct Counterexample {
  std::string property;  // "monotone" or "homogeneous"
  LoadVector loads;
  LoadVector other;   // dominated vector or scaled vector
  double scale = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct WellBehavedReport {
  bool monotone_ok = true;
  bool homogeneous_ok = true;
  std::vector<Counterexample> counterexamples;
};

// Samples random dominated load pairs and random positive rescalings; reports
// violations beyond 1e-9 relative.
WellBehavedReport check_well_behaved(const ObjectiveSpec& objective, int probe_count,
                                     std::uint64_t seed);

struct ScalingVector {
  std::vector<double> s;  // optimal per-agent loads for the target objective
};

// Scaled instance q_{i,j} = p_{i,j}/s_i together with the parameter map
// logw'_i = logw~_i - alpha * log s_i. The proportional allocation of
// (P, alpha, w') equals that of (q, alpha, w~) entrywise.
struct ScaledInstance {
  WeightMatrix q;
  double alpha = 0.0;
  std::vector<double> log_s;

  ParameterVector transform_params(const ParameterVector& w_tilde) const;
};

ScaledInstance reduce_general(const WeightMatrix& P, const ScalingVector& s, double alpha);

}  // namespace alloclab::objectives
