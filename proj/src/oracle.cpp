#include "alloclab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "alloclab/core.hpp"
#include "alloclab/rng.hpp"

namespace alloclab::oracle {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <typename S>
double to_double(const S& v) {
  if constexpr (std::is_same_v<S, double>) {
    return v;
  } else {
    return v.template convert_to<double>();
  }
}

template <typename S>
constexpr double pivot_eps() {
  return std::is_same_v<S, double> ? 1e-9 : 0.0;
}

// Dense two-phase simplex with Bland's rule. Rows are equalities Av = b with
// b >= 0 and v >= 0; artificial columns sit after the structural ones.
template <typename S>
class SimplexTableau {
 public:
  SimplexTableau(int rows, int cols) : rows_(rows), cols_(cols) {
    a_.assign(static_cast<std::size_t>(rows) * (cols + rows), S(0));
    b_.assign(rows, S(0));
    cost_.assign(cols, S(0));
    basis_.resize(rows);
    row_active_.assign(rows, true);
  }

  S& at(int r, int c) { return a_[static_cast<std::size_t>(r) * (cols_ + rows_) + c]; }
  S& rhs(int r) { return b_[r]; }
  S& cost(int c) { return cost_[c]; }

  // Returns the optimal objective value; solution values via value_of().
  S solve() {
    const S eps = S(pivot_eps<S>());

    // Phase 1: artificial basis, minimize the artificial sum.
    for (int r = 0; r < rows_; ++r) {
      at(r, cols_ + r) = S(1);
      basis_[r] = cols_ + r;
    }
    std::vector<S> z(cols_ + rows_, S(0));
    S obj(0);
    for (int c = 0; c < cols_ + rows_; ++c) {
      z[c] = (c >= cols_) ? S(1) : S(0);
      for (int r = 0; r < rows_; ++r) z[c] -= at(r, c);  // basis costs are all 1
    }
    for (int r = 0; r < rows_; ++r) obj -= b_[r];
    run_pivots(z, obj, /*allow_artificial=*/true, eps);
    if (-obj > eps && -obj > S(0)) {
      throw Infeasible("linear program has no feasible point");
    }
    drive_out_artificials(eps);

    // Phase 2: the real objective.
    for (int c = 0; c < cols_ + rows_; ++c) z[c] = (c < cols_) ? cost_[c] : S(0);
    obj = S(0);
    for (int r = 0; r < rows_; ++r) {
      if (!row_active_[r] || basis_[r] >= cols_) continue;
      const S cb = cost_[basis_[r]];
      if (cb == S(0)) continue;
      for (int c = 0; c < cols_ + rows_; ++c) z[c] -= cb * at(r, c);
      obj -= cb * b_[r];
    }
    run_pivots(z, obj, /*allow_artificial=*/false, eps);
    return -obj;
  }

  S value_of(int col) const {
    for (int r = 0; r < rows_; ++r) {
      if (row_active_[r] && basis_[r] == col) return b_[r];
    }
    return S(0);
  }

 private:
  void run_pivots(std::vector<S>& z, S& obj, bool allow_artificial, const S& eps) {
    for (;;) {
      int enter = -1;
      const int limit = allow_artificial ? cols_ + rows_ : cols_;
      for (int c = 0; c < limit; ++c) {
        if (z[c] < -eps) {
          enter = c;
          break;  // Bland: smallest eligible index
        }
      }
      if (enter < 0) return;

      int leave = -1;
      S best_ratio(0);
      for (int r = 0; r < rows_; ++r) {
        if (!row_active_[r] || !(at(r, enter) > eps)) continue;
        const S ratio = b_[r] / at(r, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw Error("linear program is unbounded");
      pivot(leave, enter, z, obj);
    }
  }

  void pivot(int r, int c, std::vector<S>& z, S& obj) {
    const S piv = at(r, c);
    for (int k = 0; k < cols_ + rows_; ++k) at(r, k) /= piv;
    b_[r] /= piv;
    for (int rr = 0; rr < rows_; ++rr) {
      if (rr == r || !row_active_[rr]) continue;
      const S factor = at(rr, c);
      if (factor == S(0)) continue;
      for (int k = 0; k < cols_ + rows_; ++k) at(rr, k) -= factor * at(r, k);
      b_[rr] -= factor * b_[r];
      if constexpr (std::is_same_v<S, double>) {
        if (b_[rr] < 0 && b_[rr] > -1e-12) b_[rr] = 0;
      }
    }
    const S zf = z[c];
    if (zf != S(0)) {
      for (int k = 0; k < cols_ + rows_; ++k) z[k] -= zf * at(r, k);
      obj -= zf * b_[r];
    }
    basis_[r] = c;
  }

  // Replace basic artificials by structural columns; redundant rows go
  // inactive.
  void drive_out_artificials(const S& eps) {
    for (int r = 0; r < rows_; ++r) {
      if (!row_active_[r] || basis_[r] < cols_) continue;
      int pivot_col = -1;
      for (int c = 0; c < cols_; ++c) {
        const S v = at(r, c);
        if (v > eps || v < -eps) {
          pivot_col = c;
          break;
        }
      }
      if (pivot_col < 0) {
        row_active_[r] = false;
        continue;
      }
      std::vector<S> dummy_z(cols_ + rows_, S(0));
      S dummy_obj(0);
      pivot(r, pivot_col, dummy_z, dummy_obj);
    }
  }

  int rows_;
  int cols_;
  std::vector<S> a_;
  std::vector<S> b_;
  std::vector<S> cost_;
  std::vector<int> basis_;
  std::vector<bool> row_active_;
};

template <typename S>
OptResult lp_opt_impl(const WeightMatrix& P, Direction direction) {
  const int m = P.agents();
  const int n = P.items();

  // Variable layout: admissible x_{i,j}, then T, then one slack per agent.
  std::vector<int> var_of(static_cast<std::size_t>(m) * n, -1);
  int num_x = 0;
  for (int j = 0; j < n; ++j) {
    bool any = false;
    for (int i = 0; i < m; ++i) {
      if (P.admissible(i, j)) {
        var_of[static_cast<std::size_t>(j) * m + i] = num_x++;
        any = true;
      }
    }
    if (!any) throw Infeasible("item " + std::to_string(j) + " has no admissible agent");
  }
  const int t_var = num_x;
  const int slack0 = num_x + 1;
  const int cols = num_x + 1 + m;
  const int rows = n + m;

  SimplexTableau<S> tab(rows, cols);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const int v = var_of[static_cast<std::size_t>(j) * m + i];
      if (v >= 0) tab.at(j, v) = S(1);
    }
    tab.rhs(j) = S(1);
  }
  for (int i = 0; i < m; ++i) {
    const int row = n + i;
    for (int j = 0; j < n; ++j) {
      const int v = var_of[static_cast<std::size_t>(j) * m + i];
      if (v >= 0) tab.at(row, v) = S(P.at(i, j));
    }
    // MinMax: l_i - T <= 0, slack +1. MaxMin: T - l_i <= 0, slack -1 on l_i row.
    tab.at(row, t_var) = S(-1);
    tab.at(row, slack0 + i) = direction == Direction::MinMax ? S(1) : S(-1);
    tab.rhs(row) = S(0);
  }
  tab.cost(t_var) = direction == Direction::MinMax ? S(1) : S(-1);

  const S obj = tab.solve();
  OptResult result{direction == Direction::MinMax ? to_double<S>(obj) : -to_double<S>(obj),
                   AssignmentMatrix(m, n), OptMethod::Lp};
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const int v = var_of[static_cast<std::size_t>(j) * m + i];
      if (v >= 0) {
        const double x = to_double<S>(tab.value_of(v));
        result.assignment.at(i, j) = x > 0.0 ? x : 0.0;
        sum += result.assignment.at(i, j);
      }
    }
    for (int i = 0; i < m; ++i) result.assignment.at(i, j) /= sum;
  }
  return result;
}

}  // namespace

OptResult lp_opt(const WeightMatrix& P, Direction direction, bool exact_arithmetic) {
  return exact_arithmetic ? lp_opt_impl<Rational>(P, direction)
                          : lp_opt_impl<double>(P, direction);
}

// ---- Grid enumeration -------------------------------------------------------

namespace {

void compositions_of(int m, int q, std::vector<std::vector<int>>& out) {
  std::vector<int> current(m, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      current[pos] = left;
      out.push_back(current);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      current[pos] = k;
      rec(pos + 1, left - k);
    }
  };
  rec(0, q);
}

struct GridSearch {
  const WeightMatrix& P;
  int q;
  std::vector<std::vector<int>> comps;
  std::vector<std::vector<int>> allowed;  // per item, composition indices
  std::vector<double> suffix_row_sum;     // [j * m + i]: admissible weight after item j
  LoadVector loads;
  std::vector<int> choice;
  std::vector<int> best_choice;
  double best = 0.0;
  bool maximize = false;

  explicit GridSearch(const WeightMatrix& P_in, Direction direction, int q_in)
      : P(P_in), q(q_in) {
    maximize = is_maximization(direction);
    compositions_of(P.agents(), q, comps);
    allowed.resize(P.items());
    for (int j = 0; j < P.items(); ++j) {
      for (std::size_t c = 0; c < comps.size(); ++c) {
        bool ok = true;
        for (int i = 0; i < P.agents(); ++i) {
          if (comps[c][i] > 0 && !P.admissible(i, j)) ok = false;
        }
        if (ok) allowed[j].push_back(static_cast<int>(c));
      }
      if (allowed[j].empty()) throw Infeasible("item has no admissible agent");
    }
    suffix_row_sum.assign(static_cast<std::size_t>(P.items() + 1) * P.agents(), 0.0);
    for (int j = P.items() - 1; j >= 0; --j) {
      for (int i = 0; i < P.agents(); ++i) {
        suffix_row_sum[static_cast<std::size_t>(j) * P.agents() + i] =
            suffix_row_sum[static_cast<std::size_t>(j + 1) * P.agents() + i] +
            (P.admissible(i, j) ? P.at(i, j) : 0.0);
      }
    }
    loads.assign(P.agents(), 0.0);
    choice.assign(P.items(), 0);
    best = maximize ? -1.0 : std::numeric_limits<double>::infinity();
  }

  void run() { descend(0); }

  void descend(int j) {
    if (j == P.items()) {
      const double value = maximize ? *std::min_element(loads.begin(), loads.end())
                                    : *std::max_element(loads.begin(), loads.end());
      if ((maximize && value > best) || (!maximize && value < best)) {
        best = value;
        best_choice = choice;
      }
      return;
    }
    if (!maximize) {
      // Loads only grow; a partial max already beats nothing better.
      const double partial = *std::max_element(loads.begin(), loads.end());
      if (partial >= best) return;
    } else {
      double optimistic = std::numeric_limits<double>::infinity();
      for (int i = 0; i < P.agents(); ++i) {
        optimistic = std::min(
            optimistic, loads[i] + suffix_row_sum[static_cast<std::size_t>(j) * P.agents() + i]);
      }
      if (optimistic <= best) return;
    }
    for (int c : allowed[j]) {
      for (int i = 0; i < P.agents(); ++i) {
        if (comps[c][i] > 0) loads[i] += comps[c][i] * P.at(i, j) / q;
      }
      choice[j] = c;
      descend(j + 1);
      for (int i = 0; i < P.agents(); ++i) {
        if (comps[c][i] > 0) loads[i] -= comps[c][i] * P.at(i, j) / q;
      }
    }
  }
};

}  // namespace

OptResult grid_opt(const WeightMatrix& P, Direction direction, int q) {
  if (P.agents() > 3 || P.items() > 4 || q > 64 || q < 1) {
    throw BudgetExceeded("grid oracle is limited to m<=3, n<=4, q<=64");
  }
  GridSearch search(P, direction, q);
  search.run();
  OptResult result{search.best, AssignmentMatrix(P.agents(), P.items()), OptMethod::Grid};
  for (int j = 0; j < P.items(); ++j) {
    const auto& comp = search.comps[search.best_choice[j]];
    for (int i = 0; i < P.agents(); ++i) {
      result.assignment.at(i, j) = static_cast<double>(comp[i]) / q;
    }
  }
  return result;
}

// ---- Certified smooth-objective optimizer -----------------------------------

namespace {

// Exact single-item update for sum of logs: maximize sum_i log(a_i + p_i t_i)
// over the simplex. Water-filling via bisection on the KKT multiplier.
void waterfill_log(const std::vector<double>& a, const std::vector<double>& p,
                   std::vector<double>& t) {
  const int m = static_cast<int>(a.size());
  auto total = [&](double lambda) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      if (p[i] <= 0.0) continue;
      const double ti = 1.0 / lambda - a[i] / p[i];
      if (ti > 0.0) sum += ti;
    }
    return sum;
  };
  double hi = 0.0;
  for (int i = 0; i < m; ++i) {
    if (p[i] > 0.0) hi = std::max(hi, p[i] / std::max(a[i], 1e-300));
  }
  hi = std::max(hi, 1e-12);
  while (total(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (total(lo) < 1.0) lo *= 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) >= 1.0 ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    t[i] = 0.0;
    if (p[i] > 0.0) {
      const double ti = 1.0 / lambda - a[i] / p[i];
      if (ti > 0.0) t[i] = ti;
    }
    sum += t[i];
  }
  for (int i = 0; i < m; ++i) t[i] /= sum;
}

// Exact single-item update for sum of p-th powers: minimize
// sum_i (a_i + p_i t_i)^p over the simplex.
void waterfill_power(const std::vector<double>& a, const std::vector<double>& p, double norm_p,
                     std::vector<double>& t) {
  const int m = static_cast<int>(a.size());
  if (norm_p == 1.0) {
    int best = 0;
    for (int i = 1; i < m; ++i) {
      if (p[i] > 0.0 && (p[best] <= 0.0 || p[i] < p[best])) best = i;
    }
    std::fill(t.begin(), t.end(), 0.0);
    t[best] = 1.0;
    return;
  }
  const double inv = 1.0 / (norm_p - 1.0);
  auto total = [&](double mu) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      if (p[i] <= 0.0) continue;
      const double level = std::pow(mu / (norm_p * p[i]), inv);
      const double ti = (level - a[i]) / p[i];
      if (ti > 0.0) sum += ti;
    }
    return sum;
  };
  double lo = 1e-300, hi = 1.0;
  while (total(hi) < 1.0) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) >= 1.0 ? hi : lo) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    t[i] = 0.0;
    if (p[i] > 0.0) {
      const double level = std::pow(mu / (norm_p * p[i]), inv);
      const double ti = (level - a[i]) / p[i];
      if (ti > 0.0) t[i] = ti;
    }
    sum += t[i];
  }
  if (sum <= 0.0) {
    // All water levels below the existing loads; dump on the cheapest row.
    int best = 0;
    for (int i = 1; i < m; ++i) {
      if (p[i] > 0.0 && (p[best] <= 0.0 || p[i] < p[best])) best = i;
    }
    t[best] = 1.0;
    return;
  }
  for (int i = 0; i < m; ++i) t[i] /= sum;
}

}  // namespace

ObjectiveOptResult objective_opt(const WeightMatrix& P, const objectives::ObjectiveSpec& objective,
                                 double rel_tol, int max_sweeps) {
  using objectives::ObjectiveKind;
  if (objective.kind == ObjectiveKind::MinMax || objective.kind == ObjectiveKind::MaxMin) {
    auto lp = lp_opt(P, objective.kind == ObjectiveKind::MinMax ? Direction::MinMax
                                                                : Direction::MaxMin);
    LoadVector ell = core::loads(P, lp.assignment);
    return {lp.value, std::move(ell), std::move(lp.assignment), 0.0};
  }
  if (objective.kind != ObjectiveKind::NashWelfare && objective.kind != ObjectiveKind::LpNorm) {
    throw Error("objective_opt supports minmax, maxmin, nash and lp objectives");
  }

  const bool nash = objective.kind == ObjectiveKind::NashWelfare;
  const int m = P.agents();
  const int n = P.items();

  AssignmentMatrix X(m, n);
  for (int j = 0; j < n; ++j) {
    int adm = 0;
    for (int i = 0; i < m; ++i) adm += P.admissible(i, j) ? 1 : 0;
    for (int i = 0; i < m; ++i) {
      X.at(i, j) = P.admissible(i, j) ? 1.0 / adm : 0.0;
    }
  }
  LoadVector ell = core::loads(P, X);

  std::vector<double> a(m), pj(m), t(m);
  double gap_rel = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < m; ++i) {
        pj[i] = P.admissible(i, j) ? P.at(i, j) : 0.0;
        a[i] = ell[i] - pj[i] * X.at(i, j);
        if (a[i] < 0.0) a[i] = 0.0;
      }
      if (nash) {
        waterfill_log(a, pj, t);
      } else {
        waterfill_power(a, pj, objective.p, t);
      }
      for (int i = 0; i < m; ++i) {
        ell[i] = a[i] + pj[i] * t[i];
        X.at(i, j) = t[i];
      }
    }

    // Linearization gap: certified bound on the remaining suboptimality.
    double gap = 0.0;
    double denom = 0.0;
    if (nash) {
      for (int j = 0; j < n; ++j) {
        double best = 0.0, cur = 0.0;
        for (int i = 0; i < m; ++i) {
          if (!P.admissible(i, j)) continue;
          const double g = P.at(i, j) / ell[i];
          best = std::max(best, g);
          cur += g * X.at(i, j);
        }
        gap += best - cur;
      }
      denom = m;  // log-objective gap vs geometric-mean relative error
    } else {
      double h = 0.0;
      for (int i = 0; i < m; ++i) h += std::pow(ell[i], objective.p);
      for (int j = 0; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity(), cur = 0.0;
        for (int i = 0; i < m; ++i) {
          if (!P.admissible(i, j)) continue;
          const double g = objective.p * std::pow(ell[i], objective.p - 1.0) * P.at(i, j);
          best = std::min(best, g);
          cur += g * X.at(i, j);
        }
        gap += cur - best;
      }
      denom = objective.p * h;
    }
    gap_rel = gap / denom;
    if (gap_rel <= rel_tol) {
      return {objectives::evaluate(objective, ell), std::move(ell), std::move(X), gap_rel};
    }
  }
  throw MaxIterExceeded("objective optimizer did not certify within the sweep budget");
}

ObjectiveOptResult grid_opt_objective(const WeightMatrix& P,
                                      const objectives::ObjectiveSpec& objective, int q) {
  if (P.agents() > 3 || P.items() > 4 || q > 64 || q < 1) {
    throw BudgetExceeded("grid oracle is limited to m<=3, n<=4, q<=64");
  }
  std::vector<std::vector<int>> comps;
  compositions_of(P.agents(), q, comps);

  const bool maximize = is_maximization(objective.direction);
  ObjectiveOptResult best{maximize ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity(),
                          {}, AssignmentMatrix(P.agents(), P.items()), 0.0};

  LoadVector loads(P.agents(), 0.0);
  std::vector<int> choice(P.items(), 0);
  std::function<void(int)> rec = [&](int j) {
    if (j == P.items()) {
      double value;
      try {
        value = objectives::evaluate(objective, loads);
      } catch (const objectives::NonPositiveLoad&) {
        return;  // outside the objective's domain
      }
      if ((maximize && value > best.value) || (!maximize && value < best.value)) {
        best.value = value;
        best.loads = loads;
        for (int jj = 0; jj < P.items(); ++jj) {
          for (int i = 0; i < P.agents(); ++i) {
            best.assignment.at(i, jj) = static_cast<double>(comps[choice[jj]][i]) / q;
          }
        }
      }
      return;
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
      bool ok = true;
      for (int i = 0; i < P.agents(); ++i) {
        if (comps[c][i] > 0 && !P.admissible(i, j)) ok = false;
      }
      if (!ok) continue;
      for (int i = 0; i < P.agents(); ++i) {
        if (comps[c][i] > 0) loads[i] += comps[c][i] * P.at(i, j) / q;
      }
      choice[j] = static_cast<int>(c);
      rec(j + 1);
      for (int i = 0; i < P.agents(); ++i) {
        if (comps[c][i] > 0) loads[i] -= comps[c][i] * P.at(i, j) / q;
      }
    }
  };
  rec(0);
  return best;
}

// ---- Auxiliary graph ---------------------------------------------------------

double AuxGraph::aspect_ratio() const {
  const auto [lo, hi] = std::minmax_element(ratio_vector.begin(), ratio_vector.end());
  return *hi / *lo;
}

AuxGraph build_aux_graph(const WeightMatrix& P, const AssignmentMatrix& x_star,
                         Direction direction, double support_tol) {
  if (P.agents() != x_star.agents() || P.items() != x_star.items()) {
    throw ShapeMismatch("weight and assignment shapes differ");
  }
  const int m = P.agents();
  AuxGraph graph;
  graph.agents = m;
  graph.direction = direction;
  graph.edge_cost.assign(m, std::vector<double>(m, std::numeric_limits<double>::infinity()));

  for (int i = 0; i < m; ++i) {
    bool has_support = false;
    for (int j = 0; j < P.items(); ++j) {
      if (x_star.at(i, j) > support_tol && P.admissible(i, j)) has_support = true;
    }
    if (!has_support) throw NoSupport(i);
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      double extremal = std::numeric_limits<double>::quiet_NaN();
      for (int j = 0; j < P.items(); ++j) {
        if (!(x_star.at(i, j) > support_tol) || !P.admissible(i, j) || !P.admissible(k, j)) {
          continue;
        }
        const double ratio = P.at(k, j) / P.at(i, j);
        if (std::isnan(extremal)) {
          extremal = ratio;
        } else {
          extremal = direction == Direction::MinMax ? std::min(extremal, ratio)
                                                    : std::max(extremal, ratio);
        }
      }
      if (!std::isnan(extremal)) graph.edge_cost[i][k] = std::log(extremal);
    }
  }

  // Bellman-Ford from the source; edges source->k all cost zero.
  std::vector<double> dist(m, 0.0);
  bool changed = true;
  for (int round = 0; round < m && changed; ++round) {
    changed = false;
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        const double c = graph.edge_cost[i][k];
        if (!std::isfinite(c)) continue;
        if (dist[i] + c < dist[k] - 1e-15) {
          dist[k] = dist[i] + c;
          changed = true;
        }
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      const double c = graph.edge_cost[i][k];
      if (!std::isfinite(c)) continue;
      if (dist[i] + c < dist[k] - 1e-9) {
        throw NegativeCycle("auxiliary graph has a negative cycle; the assignment is not optimal");
      }
    }
  }
  graph.potential = dist;
  graph.ratio_vector.resize(m);
  for (int i = 0; i < m; ++i) graph.ratio_vector[i] = std::exp(dist[i]);
  return graph;
}

RestrictedRelated to_restricted_related(const WeightMatrix& P, const std::vector<double>& u,
                                        Direction direction, double tie_tol) {
  if (static_cast<int>(u.size()) != P.agents()) {
    throw LengthMismatch("ratio vector has wrong length");
  }
  for (double v : u) {
    if (!(v > 0.0)) throw Error("ratio vector entries must be positive");
  }
  RestrictedRelated out;
  out.agent_speed.resize(P.agents());
  for (int i = 0; i < P.agents(); ++i) out.agent_speed[i] = 1.0 / u[i];
  out.item_weight.resize(P.items());
  out.admissible.assign(P.agents(), std::vector<std::uint8_t>(P.items(), 0));

  for (int j = 0; j < P.items(); ++j) {
    double ext = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < P.agents(); ++i) {
      if (!P.admissible(i, j)) continue;
      const double v = P.at(i, j) / u[i];
      if (std::isnan(ext)) {
        ext = v;
      } else {
        ext = direction == Direction::MinMax ? std::min(ext, v) : std::max(ext, v);
      }
    }
    out.item_weight[j] = ext;
    for (int i = 0; i < P.agents(); ++i) {
      if (!P.admissible(i, j)) continue;
      const double v = P.at(i, j) / u[i];
      if (std::abs(v - ext) <= tie_tol * std::abs(ext)) out.admissible[i][j] = 1;
    }
  }
  return out;
}

// ---- Sinkhorn scaling --------------------------------------------------------

SinkhornResult sinkhorn_scale(const std::vector<std::vector<double>>& Z,
                              const std::vector<double>& row_targets,
                              const std::vector<double>& col_targets, double tol, int max_iter) {
  const int m = static_cast<int>(Z.size());
  if (m == 0) throw Error("empty pattern matrix");
  const int n = static_cast<int>(Z.front().size());
  if (static_cast<int>(row_targets.size()) != m || static_cast<int>(col_targets.size()) != n) {
    throw LengthMismatch("marginal targets have wrong lengths");
  }
  double row_total = 0.0, col_total = 0.0;
  for (double r : row_targets) row_total += r;
  for (double c : col_targets) col_total += c;
  if (std::abs(row_total - col_total) > 1e-9 * std::max(1.0, std::abs(row_total))) {
    throw Error("row and column targets must have equal totals");
  }

  SinkhornResult result{std::vector<double>(m, 1.0), std::vector<double>(n, 1.0), 0};
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += Z[i][j] * result.col_scale[j];
      if (s <= 0.0) {
        if (row_targets[i] == 0.0) {
          result.row_scale[i] = 0.0;
          continue;
        }
        throw MaxIterExceeded("pattern row cannot reach a positive target");
      }
      result.row_scale[i] = row_targets[i] / s;
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += result.row_scale[i] * Z[i][j];
      if (s <= 0.0) {
        if (col_targets[j] == 0.0) {
          result.col_scale[j] = 0.0;
          continue;
        }
        throw MaxIterExceeded("pattern column cannot reach a positive target");
      }
      result.col_scale[j] = col_targets[j] / s;
    }
    result.iterations = iter;

    double dev = 0.0;
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += result.row_scale[i] * Z[i][j] * result.col_scale[j];
      dev = std::max(dev, std::abs(s - row_targets[i]) / std::max(1.0, std::abs(row_targets[i])));
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += result.row_scale[i] * Z[i][j] * result.col_scale[j];
      dev = std::max(dev, std::abs(s - col_targets[j]) / std::max(1.0, std::abs(col_targets[j])));
    }
    if (dev <= tol) return result;
  }
  throw MaxIterExceeded("matrix scaling did not converge; the support may be infeasible");
}

// ---- Generators ---------------------------------------------------------------

GeneratedInstance gen_uniform(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw BadSize("instance needs at least one agent and one item");
  Rng rng(seed);
  WeightMatrix P(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) P.set(i, j, rng.uniform(1.0, 10.0));
  }
  return {std::move(P), std::nullopt};
}

GeneratedInstance gen_restricted(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw BadSize("instance needs at least one agent and one item");
  Rng rng(seed);
  WeightMatrix P(m, n);
  for (int j = 0; j < n; ++j) {
    const double pj = rng.uniform(1.0, 10.0);
    bool any = false;
    for (int i = 0; i < m; ++i) {
      if (rng.uniform01() < 0.5) {
        P.set(i, j, pj);
        any = true;
      } else {
        P.set_inadmissible(i, j);
      }
    }
    if (!any) P.set(rng.uniform_int(0, m - 1), j, pj);
  }
  return {std::move(P), std::nullopt};
}

namespace {

class MinMaxLowerGenerator final : public BatchGenerator {
 public:
  explicit MinMaxLowerGenerator(int k) : k_(k) {
    if (k < 1 || k > 20) throw BadSize("halving construction needs 1 <= k <= 20");
    m_ = 1 << k;
    a_count_.assign(m_, 0);
  }

  int agents() const { return m_; }

  std::optional<WeightMatrix> next_batch(const LoadVector& current_loads) override {
    if (batch_ == 0) {
      survivors_.resize(m_);
      for (int i = 0; i < m_; ++i) survivors_[i] = i;
    } else {
      if (static_cast<int>(survivors_.size()) <= 1) return std::nullopt;
      std::vector<int> next;
      for (const auto& [a, b] : pairs_) {
        // The more loaded agent of the pair stays admissible; ties keep the
        // smaller index.
        next.push_back(current_loads[a] >= current_loads[b] ? a : b);
      }
      survivors_ = std::move(next);
      if (static_cast<int>(survivors_.size()) <= 1) return std::nullopt;
    }

    const int items = static_cast<int>(survivors_.size()) / 2;
    WeightMatrix batch(m_, items);
    pairs_.clear();
    for (int s = 0; s < items; ++s) {
      const int a = survivors_[2 * s];
      const int b = survivors_[2 * s + 1];
      pairs_.emplace_back(a, b);
      for (int i = 0; i < m_; ++i) {
        if (i == a || i == b) {
          batch.set(i, s, 1.0);
        } else {
          batch.set_inadmissible(i, s);
        }
      }
      a_count_[a] += 1;
      a_count_[b] += 1;
    }
    if (instance_) {
      instance_->append_items(batch);
    } else {
      instance_ = batch;
    }
    batch_ += 1;
    return batch;
  }

  const WeightMatrix& instance() const override {
    if (!instance_) throw Error("no batch emitted yet");
    return *instance_;
  }

  ParameterVector planted_params() const override {
    std::vector<double> logw(m_);
    for (int i = 0; i < m_; ++i) logw[i] = -a_count_[i] * std::log(2.0);
    return ParameterVector(std::move(logw));
  }

 private:
  int k_;
  int m_ = 0;
  int batch_ = 0;
  std::vector<int> survivors_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> a_count_;
  std::optional<WeightMatrix> instance_;
};

class MaxMinLowerGenerator final : public BatchGenerator {
 public:
  MaxMinLowerGenerator(int m, double tau) : m_(m), tau_(tau) {
    if (m < 2) throw BadSize("construction needs at least two agents");
    if (!(tau >= 1.0) || tau > m) throw BadSize("tau must satisfy 1 <= tau <= m");
  }

  std::optional<WeightMatrix> next_batch(const LoadVector& current_loads) override {
    if (batch_ == 0) {
      WeightMatrix batch(m_, m_);
      for (int j = 0; j < m_; ++j) {
        for (int i = 0; i < m_; ++i) batch.set(i, j, 1.0);
      }
      instance_ = batch;
      batch_ = 1;
      return batch;
    }
    if (batch_ == 1) {
      spared_ = 0;
      for (int i = 1; i < m_; ++i) {
        if (current_loads[i] < current_loads[spared_]) spared_ = i;
      }
      const int items = (m_ - 1) * m_;
      WeightMatrix batch(m_, items);
      for (int j = 0; j < items; ++j) {
        for (int i = 0; i < m_; ++i) {
          if (i == spared_) {
            batch.set_inadmissible(i, j);
          } else {
            batch.set(i, j, 1.0);
          }
        }
      }
      instance_->append_items(batch);
      batch_ = 2;
      return batch;
    }
    return std::nullopt;
  }

  const WeightMatrix& instance() const override {
    if (!instance_) throw Error("no batch emitted yet");
    return *instance_;
  }

  ParameterVector planted_params() const override {
    if (spared_ < 0) throw Error("construction is not finished");
    std::vector<double> logw(m_, 0.0);
    logw[spared_] = std::log(tau_);
    return ParameterVector(std::move(logw));
  }

 private:
  int m_;
  double tau_;
  int batch_ = 0;
  int spared_ = -1;
  std::optional<WeightMatrix> instance_;
};

}  // namespace

std::unique_ptr<BatchGenerator> make_minmax_lower_generator(int k) {
  return std::make_unique<MinMaxLowerGenerator>(k);
}

std::unique_ptr<BatchGenerator> make_maxmin_lower_generator(int m, double tau) {
  return std::make_unique<MaxMinLowerGenerator>(m, tau);
}

AdversarialRun run_against(BatchGenerator& generator, const TransformSpec& transform,
                           const ParameterVector& params) {
  LoadVector loads(params.size(), 0.0);
  std::optional<AssignmentMatrix> assignment;

  for (;;) {
    auto batch = generator.next_batch(loads);
    if (!batch) break;
    auto alloc = core::allocate_all(*batch, transform, params);
    for (int i = 0; i < params.size(); ++i) loads[i] += alloc.loads[i];
    if (!assignment) {
      assignment = std::move(alloc.assignment);
    } else {
      AssignmentMatrix merged(assignment->agents(), assignment->items() + batch->items());
      for (int j = 0; j < assignment->items(); ++j) {
        for (int i = 0; i < merged.agents(); ++i) merged.at(i, j) = assignment->at(i, j);
      }
      for (int j = 0; j < batch->items(); ++j) {
        for (int i = 0; i < merged.agents(); ++i) {
          merged.at(i, assignment->items() + j) = alloc.assignment.at(i, j);
        }
      }
      assignment = std::move(merged);
    }
  }
  return {generator.instance(), std::move(*assignment), std::move(loads),
          generator.planted_params()};
}

}  // namespace alloclab::oracle
