#pragma once

#include "alloclab/core.hpp"
#include "alloclab/oracle.hpp"
#include "alloclab/types.hpp"

namespace alloclab::learn {

// Bounded-precision parameter grid: w_i = delta_i / u_i^alpha where delta_i
// and u_i range over { base^r : r in 1..K }, base = 1/(1-eps) for MaxMin and
// 1+eps for MinMax. Enumeration is lexicographic in (delta exponents, u
// exponents) and contains exactly K^(2m) vectors.
struct NetGrid {
  int m = 0;
  double eps = 0.0;
  int K = 0;
  double alpha = 0.0;
  Direction direction = Direction::MaxMin;

  double log_base() const;
  std::uint64_t size() const;  // K^(2m)
  ParameterVector vector_at(std::uint64_t index) const;
};

// K defaults to ceil((m/eps) * ln(m/eps)) capped so that K^(2m) stays within
// the enumeration budget of 1e7.
NetGrid make_net_grid(int m, double eps, Direction direction, double alpha, int K = 0);

std::vector<ParameterVector> net_enumerate(const NetGrid& grid);

// Result of the discretization/ratio-capping pass. For MaxMin the harness is
// expected to hand out reserved_fraction of every item uniformly before
// running the proportional allocation on the rest.
struct PreprocessResult {
  WeightMatrix P;
  double reserved_fraction = 0.0;  // eps for MaxMin, 0 for MinMax
};

// MaxMin: round weights down to powers of 1/(1-eps) and replace entries whose
// cross-agent column ratio exceeds m^3/eps^2 by a tiny delta. MinMax: round up
// to powers of 1+eps and mark entries more than m/eps above the column
// minimum inadmissible.
PreprocessResult preprocess(const WeightMatrix& P, double eps, Direction direction);

// Finite per-item distribution; items are independent (product distribution).
struct ItemDistribution {
  struct Outcome {
    double probability = 0.0;
    std::vector<double> column;  // +inf marks inadmissible entries
  };

  int m = 0;
  std::vector<std::vector<Outcome>> items;

  int item_count() const { return static_cast<int>(items.size()); }
  void validate() const;  // probabilities sum to 1 per item
};

std::vector<WeightMatrix> sample_instances(const ItemDistribution& D, int H, std::uint64_t seed);

// Every instance in the product support with its probability. Guarded by a
// budget on the support size.
std::vector<std::pair<double, WeightMatrix>> enumerate_support(const ItemDistribution& D,
                                                               std::uint64_t budget = 100000);

// Expected optimum (lp_opt) over the exact product support.
double expected_optimum(const ItemDistribution& D, Direction direction);

struct SmallItemsReport {
  double zeta = 0.0;
  double T = 0.0;
  bool ok = false;
};

// zeta = ln(m) * max(1, 1/eps^2); ok iff every support weight is at most
// T / zeta with T the exact expected optimum.
SmallItemsReport small_items_check(const ItemDistribution& D, double eps,
                                   Direction direction = Direction::MaxMin);

// Evaluates every grid vector's average proportional-allocation loads over
// the samples and returns the one with the best min-average (MaxMin) or
// max-average (MinMax) load; ties go to the earliest enumeration index.
// When objective_values is non-null it receives one entry per grid index.
ParameterVector learn_parameters(const std::vector<WeightMatrix>& samples, const NetGrid& grid,
                                 Direction direction, double alpha,
                                 std::vector<double>* objective_values = nullptr);

// Loads of the modified allocation that reserves reserve_eps of every item
// uniformly across agents and allocates the remaining 1-reserve_eps
// proportionally.
LoadVector reserved_loads(const WeightMatrix& P, const TransformSpec& transform,
                          const ParameterVector& params, double reserve_eps);

}  // namespace alloclab::learn
