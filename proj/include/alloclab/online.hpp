#pragma once

#include "alloclab/core.hpp"
#include "alloclab/types.hpp"

namespace alloclab::online {

struct NonPositiveT : Error {
  explicit NonPositiveT(double value) : Error("threshold T must be positive, got " + std::to_string(value)) {}
};

struct EtaReport {
  double eta = 1.0;  // max over ordered agent pairs of (w_i'/w_i)(w*_i/w*_i')
};

// Approximation factor between two parameter vectors, computed as
// exp(range(logw - logw*)). Symmetric and 1 for equivalent vectors.
EtaReport eta_of(const ParameterVector& w, const ParameterVector& w_star);

// Adds i.i.d. uniform offsets in [-ln(eta)/2, +ln(eta)/2] to logw, so the
// result is eta_target-approximate to w. Deterministic under seed.
ParameterVector perturb_parameters(const ParameterVector& w, double eta_target,
                                   std::uint64_t seed);

struct StreamTraceEntry {
  int item = 0;
  std::vector<double> fractions;
};

struct StreamResult {
  AssignmentMatrix assignment;
  LoadVector loads;
  std::vector<StreamTraceEntry> trace;
};

// Feeds the items of P in column order through a fixed-parameter proportional
// allocation. Equal to allocate_all up to item order (which does not change
// the sums).
StreamResult simulate_stream(const WeightMatrix& items, double alpha,
                             const ParameterVector& params);
StreamResult simulate_stream(const WeightMatrix& items, const TransformSpec& transform,
                             const ParameterVector& params);

struct PhaseRecord {
  int agent = 0;
  int phase = 0;        // 1-based
  int items = 0;        // items allocated during the phase
  double phase_load = 0.0;
  bool closed = false;  // true when the phase ended with a halving
};

struct RobustResult {
  AssignmentMatrix assignment;
  LoadVector total_loads;
  std::vector<PhaseRecord> phase_log;   // closed phases in halving order, then open phases
  std::vector<int> phase_count;         // per agent, >= 1
  ParameterVector final_params;

  int max_phase_count() const;
};

// Threshold-reset online algorithm: allocate each item proportionally with
// the working parameters; whenever an agent's load in the current phase
// exceeds 2T, reset that phase load to zero and halve the agent's parameter.
RobustResult robust_minmax(const WeightMatrix& items, const ParameterVector& predicted,
                           double T, const TransformSpec& transform);

}  // namespace alloclab::online
