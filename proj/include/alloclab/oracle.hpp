#pragma once

#include <memory>
#include <optional>

#include "alloclab/objectives.hpp"
#include "alloclab/types.hpp"

namespace alloclab::oracle {

struct Infeasible : Error {
  explicit Infeasible(const std::string& what) : Error(what) {}
};

struct NegativeCycle : Error {
  explicit NegativeCycle(const std::string& what) : Error(what) {}
};

struct NoSupport : Error {
  explicit NoSupport(int agent)
      : Error("agent " + std::to_string(agent) + " has no support in the supplied assignment") {}
};

struct MaxIterExceeded : Error {
  explicit MaxIterExceeded(const std::string& what) : Error(what) {}
};

struct BadSize : Error {
  explicit BadSize(const std::string& what) : Error(what) {}
};

enum class OptMethod { Lp, Grid };

struct OptResult {
  double value = 0.0;
  AssignmentMatrix assignment;
  OptMethod method = OptMethod::Lp;
};

// Exact MinMax/MaxMin optimum via a dense two-phase simplex over the
// mn+1-variable LP (Bland's rule; exact rational pivots behind the flag).
OptResult lp_opt(const WeightMatrix& P, Direction direction, bool exact_arithmetic = false);

// Exhaustive enumeration of per-item simplex grids at resolution 1/q.
// Desk-scale validation oracle; throws BudgetExceeded beyond m<=3, n<=4, q<=64.
OptResult grid_opt(const WeightMatrix& P, Direction direction, int q);

// Certified optimizer for smooth well-behaved objectives (Nash welfare,
// lp norms): block-coordinate ascent/descent with a Frank-Wolfe gap
// certificate. MinMax/MaxMin delegate to lp_opt.
struct ObjectiveOptResult {
  double value = 0.0;
  LoadVector loads;
  AssignmentMatrix assignment;
  double certificate_gap = 0.0;  // bound on relative suboptimality
};
ObjectiveOptResult objective_opt(const WeightMatrix& P, const objectives::ObjectiveSpec& objective,
                                 double rel_tol = 1e-8, int max_sweeps = 100000);

// Exhaustive grid search for an arbitrary objective on tiny instances.
ObjectiveOptResult grid_opt_objective(const WeightMatrix& P,
                                      const objectives::ObjectiveSpec& objective, int q);

// Auxiliary exchange graph of an optimal assignment: vertex 0 plus one vertex
// per agent, edge cost c_{i,k} = ln extremal_j { p_{k,j}/p_{i,j} : x*_{i,j} > 0 }
// (min for MinMax, max for MaxMin), zero-cost edges out of vertex 0. The ratio
// vector is u_i = exp(shortest path cost from 0).
struct AuxGraph {
  int agents = 0;
  Direction direction = Direction::MinMax;
  std::vector<std::vector<double>> edge_cost;  // [i][k], +inf marks absent edges
  std::vector<double> potential;               // c*_i
  std::vector<double> ratio_vector;            // u_i = exp(c*_i)

  double aspect_ratio() const;  // max u / min u
};

AuxGraph build_aux_graph(const WeightMatrix& P, const AssignmentMatrix& x_star,
                         Direction direction, double support_tol = 1e-9);

// Restricted related representation: weight p_hat_j per item, speed v_hat_i
// per agent, admissibility pattern E. Wherever E_{i,j} = 1 the effective
// weight p_hat_j / v_hat_i equals the original p_{i,j}.
struct RestrictedRelated {
  std::vector<double> item_weight;   // p_hat
  std::vector<double> agent_speed;   // v_hat
  std::vector<std::vector<std::uint8_t>> admissible;  // E[i][j]

  double effective_weight(int i, int j) const { return item_weight[j] / agent_speed[i]; }
};

RestrictedRelated to_restricted_related(const WeightMatrix& P, const std::vector<double>& u,
                                        Direction direction, double tie_tol = 1e-12);

// Alternating row/column normalization towards target marginals on the
// support of Z. Returns the diagonal scalings.
struct SinkhornResult {
  std::vector<double> row_scale;
  std::vector<double> col_scale;
  int iterations = 0;
};

SinkhornResult sinkhorn_scale(const std::vector<std::vector<double>>& Z,
                              const std::vector<double>& row_targets,
                              const std::vector<double>& col_targets, double tol = 1e-9,
                              int max_iter = 100000);

// ---- Instance generators ----------------------------------------------------

struct GeneratedInstance {
  WeightMatrix P;
  std::optional<ParameterVector> planted;  // parameters with a known guarantee
};

GeneratedInstance gen_uniform(int m, int n, std::uint64_t seed);           // p ~ U[1,10]
GeneratedInstance gen_restricted(int m, int n, std::uint64_t seed);        // p in {p_j, inadmissible}

// Adversarial constructions are driven in batches: the generator sees the
// running algorithm's loads after each batch and emits the next one.
class BatchGenerator {
 public:
  virtual ~BatchGenerator() = default;
  // Called first with all-zero loads. Returns std::nullopt when done.
  virtual std::optional<WeightMatrix> next_batch(const LoadVector& current_loads) = 0;
  virtual const WeightMatrix& instance() const = 0;            // batches emitted so far
  virtual ParameterVector planted_params() const = 0;          // valid once exhausted
};

// Halving construction on m = 2^k agents: pairs split unit items, the more
// loaded survivor of each pair is the only one kept admissible afterwards.
std::unique_ptr<BatchGenerator> make_minmax_lower_generator(int k);

// Two-batch construction: after a uniform all-ones batch, the minimum-load
// agent is starved in a heavy second batch. planted parameters give it tau.
std::unique_ptr<BatchGenerator> make_maxmin_lower_generator(int m, double tau);

struct AdversarialRun {
  WeightMatrix instance;
  AssignmentMatrix assignment;
  LoadVector loads;
  ParameterVector planted;
};

// Runs fixed-parameter proportional allocation against an adaptive generator
// and returns the instance it produced.
AdversarialRun run_against(BatchGenerator& generator, const TransformSpec& transform,
                           const ParameterVector& params);

}  // namespace alloclab::oracle
