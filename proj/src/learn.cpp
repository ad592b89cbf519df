#include "alloclab/learn.hpp"

#include <algorithm>
#include <cmath>

#include "alloclab/parallel.hpp"
#include "alloclab/rng.hpp"

namespace alloclab::learn {

double NetGrid::log_base() const {
  return direction == Direction::MaxMin ? -std::log1p(-eps) : std::log1p(eps);
}

std::uint64_t NetGrid::size() const {
  std::uint64_t total = 1;
  for (int d = 0; d < 2 * m; ++d) total *= static_cast<std::uint64_t>(K);
  return total;
}

ParameterVector NetGrid::vector_at(std::uint64_t index) const {
  // Mixed-radix decode; the first delta exponent is the most significant
  // digit, so increasing indices enumerate (delta, u) lexicographically.
  std::vector<int> digits(2 * m);
  for (int d = 2 * m - 1; d >= 0; --d) {
    digits[d] = static_cast<int>(index % K) + 1;  // exponents range over 1..K
    index /= K;
  }
  const double lb = log_base();
  std::vector<double> logw(m);
  for (int i = 0; i < m; ++i) {
    const double log_delta = digits[i] * lb;
    const double log_u = digits[m + i] * lb;
    logw[i] = log_delta - alpha * log_u;
  }
  return ParameterVector(std::move(logw));
}

NetGrid make_net_grid(int m, double eps, Direction direction, double alpha, int K) {
  if (m < 1) throw Error("agent count must be at least 1");
  if (!(eps > 0.0) || !(eps < 1.0)) throw BadEpsilon(eps);
  constexpr std::uint64_t kBudget = 10000000;
  if (K <= 0) {
    K = static_cast<int>(std::ceil((m / eps) * std::log(m / eps)));
    if (K < 2) K = 2;
    while (K > 2) {
      std::uint64_t total = 1;
      bool over = false;
      for (int d = 0; d < 2 * m && !over; ++d) {
        total *= static_cast<std::uint64_t>(K);
        if (total > kBudget) over = true;
      }
      if (!over) break;
      --K;
    }
  }
  NetGrid grid{m, eps, K, alpha, direction};
  if (grid.size() > kBudget) throw BudgetExceeded("parameter grid exceeds the enumeration budget");
  return grid;
}

std::vector<ParameterVector> net_enumerate(const NetGrid& grid) {
  constexpr std::uint64_t kBudget = 10000000;
  if (grid.size() > kBudget) throw BudgetExceeded("parameter grid exceeds the enumeration budget");
  std::vector<ParameterVector> out;
  out.reserve(grid.size());
  for (std::uint64_t idx = 0; idx < grid.size(); ++idx) out.push_back(grid.vector_at(idx));
  return out;
}

PreprocessResult preprocess(const WeightMatrix& P, double eps, Direction direction) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw BadEpsilon(eps);
  const int m = P.agents();
  const int n = P.items();
  WeightMatrix out(m, n);

  if (direction == Direction::MaxMin) {
    const double base = 1.0 / (1.0 - eps);
    const double log_base = std::log(base);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < m; ++i) {
        if (!P.admissible(i, j)) {
          out.set_inadmissible(i, j);
          continue;
        }
        const double r = std::floor(std::log(P.at(i, j)) / log_base + 1e-12);
        out.set(i, j, std::pow(base, r));
      }
    }
    // Entries dominated by a factor beyond m^3/eps^2 within their column
    // become a tiny delta (zero-for-maximization convention).
    const double cap = static_cast<double>(m) * m * m / (eps * eps);
    const double delta = 1e-12 * out.min_admissible();
    for (int j = 0; j < n; ++j) {
      double col_max = 0.0;
      for (int i = 0; i < m; ++i) {
        if (out.admissible(i, j)) col_max = std::max(col_max, out.at(i, j));
      }
      for (int i = 0; i < m; ++i) {
        if (out.admissible(i, j) && col_max / out.at(i, j) > cap) {
          out.set(i, j, delta);
        }
      }
    }
    out.validate();
    return {std::move(out), eps};
  }

  const double base = 1.0 + eps;
  const double log_base = std::log(base);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!P.admissible(i, j)) {
        out.set_inadmissible(i, j);
        continue;
      }
      const double r = std::ceil(std::log(P.at(i, j)) / log_base - 1e-12);
      out.set(i, j, std::pow(base, r));
    }
  }
  const double cap = m / eps;
  for (int j = 0; j < n; ++j) {
    double col_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (out.admissible(i, j)) col_min = std::min(col_min, out.at(i, j));
    }
    for (int i = 0; i < m; ++i) {
      if (out.admissible(i, j) && out.at(i, j) / col_min > cap) {
        out.set_inadmissible(i, j);
      }
    }
  }
  out.validate();
  return {std::move(out), 0.0};
}

void ItemDistribution::validate() const {
  if (m < 1) throw Error("distribution needs at least one agent");
  if (items.empty()) throw Error("distribution needs at least one item");
  for (const auto& outcomes : items) {
    if (outcomes.empty()) throw Error("every item needs at least one outcome");
    double total = 0.0;
    for (const auto& o : outcomes) {
      if (!(o.probability >= 0.0)) throw Error("probabilities must be nonnegative");
      if (static_cast<int>(o.column.size()) != m) {
        throw LengthMismatch("outcome column has wrong length");
      }
      total += o.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error("item outcome probabilities must sum to 1");
    }
  }
}

namespace {

void fill_column(WeightMatrix& P, int j, const std::vector<double>& column) {
  for (int i = 0; i < P.agents(); ++i) {
    if (std::isinf(column[i])) {
      P.set_inadmissible(i, j);
    } else {
      P.set(i, j, column[i]);
    }
  }
}

}  // namespace

std::vector<WeightMatrix> sample_instances(const ItemDistribution& D, int H, std::uint64_t seed) {
  if (H < 1) throw Error("sample count must be at least 1");
  D.validate();
  Rng rng(seed);
  std::vector<WeightMatrix> out;
  out.reserve(H);
  for (int h = 0; h < H; ++h) {
    WeightMatrix P(D.m, D.item_count());
    for (int j = 0; j < D.item_count(); ++j) {
      const double roll = rng.uniform01();
      double acc = 0.0;
      const auto& outcomes = D.items[j];
      std::size_t pick = outcomes.size() - 1;
      for (std::size_t o = 0; o < outcomes.size(); ++o) {
        acc += outcomes[o].probability;
        if (roll < acc) {
          pick = o;
          break;
        }
      }
      fill_column(P, j, outcomes[pick].column);
    }
    P.validate();
    out.push_back(std::move(P));
  }
  return out;
}

std::vector<std::pair<double, WeightMatrix>> enumerate_support(const ItemDistribution& D,
                                                               std::uint64_t budget) {
  D.validate();
  std::uint64_t total = 1;
  for (const auto& outcomes : D.items) {
    total *= outcomes.size();
    if (total > budget) throw BudgetExceeded("product support exceeds the enumeration budget");
  }
  std::vector<std::pair<double, WeightMatrix>> out;
  out.reserve(total);
  std::vector<std::size_t> pick(D.item_count(), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    double prob = 1.0;
    WeightMatrix P(D.m, D.item_count());
    for (int j = D.item_count() - 1; j >= 0; --j) {
      const auto& outcomes = D.items[j];
      pick[j] = rest % outcomes.size();
      rest /= outcomes.size();
      prob *= outcomes[pick[j]].probability;
      fill_column(P, j, outcomes[pick[j]].column);
    }
    P.validate();
    out.emplace_back(prob, std::move(P));
  }
  return out;
}

double expected_optimum(const ItemDistribution& D, Direction direction) {
  double T = 0.0;
  for (const auto& [prob, P] : enumerate_support(D)) {
    if (prob == 0.0) continue;
    T += prob * oracle::lp_opt(P, direction).value;
  }
  return T;
}

SmallItemsReport small_items_check(const ItemDistribution& D, double eps, Direction direction) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw BadEpsilon(eps);
  SmallItemsReport report;
  report.T = expected_optimum(D, direction);
  report.zeta = std::log(static_cast<double>(D.m)) * std::max(1.0, 1.0 / (eps * eps));
  report.ok = true;
  for (const auto& outcomes : D.items) {
    for (const auto& o : outcomes) {
      for (double v : o.column) {
        if (!std::isinf(v) && v > report.T / report.zeta) report.ok = false;
      }
    }
  }
  return report;
}

ParameterVector learn_parameters(const std::vector<WeightMatrix>& samples, const NetGrid& grid,
                                 Direction direction, double alpha,
                                 std::vector<double>* objective_values) {
  if (samples.empty()) throw Error("learning needs at least one sample");
  for (const auto& P : samples) {
    if (P.agents() != grid.m) throw ShapeMismatch("sample agent count differs from the grid");
  }
  const std::uint64_t total = grid.size();
  if (objective_values) objective_values->assign(total, 0.0);
  const TransformSpec transform = TransformSpec::exponent(alpha);
  const bool maximize = direction == Direction::MaxMin;

  // Parallel scan over disjoint grid ranges; the merge keeps the
  // lexicographically earliest optimum so the result matches a sequential
  // enumeration exactly.
  struct Best {
    double value;
    std::uint64_t index;
  };
  Best global{maximize ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity(),
              0};
  std::exception_ptr error;

#ifdef _OPENMP
#pragma omp parallel num_threads(thread_cap())
#endif
  {
    Best local{maximize ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity(),
               std::uint64_t(-1)};
    LoadVector avg(grid.m);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (std::int64_t signed_idx = 0; signed_idx < static_cast<std::int64_t>(total);
         ++signed_idx) {
      try {
        const std::uint64_t idx = static_cast<std::uint64_t>(signed_idx);
        const ParameterVector w = grid.vector_at(idx);
        std::fill(avg.begin(), avg.end(), 0.0);
        for (const auto& P : samples) {
          auto alloc = core::allocate_all_serial(P, transform, w);
          for (int i = 0; i < grid.m; ++i) avg[i] += alloc.loads[i];
        }
        for (int i = 0; i < grid.m; ++i) avg[i] /= static_cast<double>(samples.size());
        const double value = maximize ? *std::min_element(avg.begin(), avg.end())
                                      : *std::max_element(avg.begin(), avg.end());
        if (objective_values) (*objective_values)[idx] = value;
        const bool better = maximize ? value > local.value : value < local.value;
        if (better || (value == local.value && idx < local.index)) {
          local = {value, idx};
        }
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(alloclab_learn_error)
#endif
        if (!error) error = std::current_exception();
      }
    }
#ifdef _OPENMP
#pragma omp critical(alloclab_learn_merge)
#endif
    {
      if (local.index != std::uint64_t(-1)) {
        const bool better = maximize ? local.value > global.value : local.value < global.value;
        if (better || (local.value == global.value && local.index < global.index)) {
          global = local;
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return grid.vector_at(global.index);
}

LoadVector reserved_loads(const WeightMatrix& P, const TransformSpec& transform,
                          const ParameterVector& params, double reserve_eps) {
  if (!(reserve_eps >= 0.0) || reserve_eps >= 1.0) {
    throw BadEpsilon(reserve_eps);
  }
  auto alloc = core::allocate_all(P, transform, params);
  LoadVector out(P.agents(), 0.0);
  const double share = reserve_eps / P.agents();
  for (int i = 0; i < P.agents(); ++i) {
    double uniform_part = 0.0;
    for (int j = 0; j < P.items(); ++j) {
      if (P.admissible(i, j)) uniform_part += share * P.at(i, j);
    }
    out[i] = uniform_part + (1.0 - reserve_eps) * alloc.loads[i];
  }
  return out;
}

}  // namespace alloclab::learn
