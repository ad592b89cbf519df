#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alloclab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

struct AllInadmissible : Error {
  int column;
  explicit AllInadmissible(int col)
      : Error("item " + std::to_string(col) + " has no admissible agent"), column(col) {}
};

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& what) : Error(what) {}
};

struct BadEpsilon : Error {
  explicit BadEpsilon(double eps) : Error("epsilon must lie in (0,1), got " + std::to_string(eps)) {}
};

struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

// Objective direction shared across modules. MinMax is the minimization flavor
// (load balancing), MaxMin the maximization flavor (Santa Claus).
enum class Direction { MinMax, MaxMin };

inline bool is_maximization(Direction d) { return d == Direction::MaxMin; }

inline const char* to_string(Direction d) { return d == Direction::MinMax ? "minmax" : "maxmin"; }

using LoadVector = std::vector<double>;

// m x n matrix of strictly positive item weights, stored column-major.
// An entry may be tagged inadmissible: infinite cost for minimization,
// zero utility for maximization (callers substitute a tiny delta when they
// need an all-positive matrix, see with_delta_for_max()).
class WeightMatrix {
 public:
  WeightMatrix(int agents, int items);

  // Entries equal to +infinity are stored as inadmissible tags.
  static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int agents() const { return m_; }
  int items() const { return n_; }

  double at(int i, int j) const { return values_[index(i, j)]; }
  bool admissible(int i, int j) const { return adm_[index(i, j)] != 0; }

  void set(int i, int j, double p);
  void set_inadmissible(int i, int j);

  std::span<const double> column_values(int j) const {
    return {values_.data() + static_cast<std::size_t>(j) * m_, static_cast<std::size_t>(m_)};
  }
  std::span<const std::uint8_t> column_admissible(int j) const {
    return {adm_.data() + static_cast<std::size_t>(j) * m_, static_cast<std::size_t>(m_)};
  }

  double row_sum(int i) const;  // over admissible entries
  double min_admissible() const;
  double max_admissible() const;
  double max_admissible_in_row(int i) const;
  bool fully_admissible() const;

  // Appends the columns of `other` (same agent count).
  void append_items(const WeightMatrix& other);
  // Returns a copy with every weight multiplied by c > 0.
  WeightMatrix scaled(double c) const;
  // All-positive copy: inadmissible entries become delta = 1e-12 * min weight.
  WeightMatrix with_delta_for_max() const;

  // Throws Error if any stored weight is non-positive/non-finite or some
  // column has no admissible entry.
  void validate() const;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * m_ + i; }

  int m_ = 0;
  int n_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> adm_;
};

// Per-agent learned parameters, kept in the log domain. Two vectors are
// equivalent when their logs differ by a common additive constant.
struct ParameterVector {
  std::vector<double> logw;

  ParameterVector() = default;
  explicit ParameterVector(std::vector<double> log_values) : logw(std::move(log_values)) {}

  static ParameterVector ones(int m) { return ParameterVector(std::vector<double>(m, 0.0)); }
  static ParameterVector from_weights(const std::vector<double>& w);

  int size() const { return static_cast<int>(logw.size()); }
  double weight(int i) const { return std::exp(logw[i]); }

  ParameterVector shifted(double c) const;
  // Representative of the equivalence class with logw[0] == 0.
  ParameterVector normalized() const;
  bool equivalent_to(const ParameterVector& other, double tol) const;

  void validate() const;  // entries finite
};

// Weight transformation applied before proportional allocation.
class TransformSpec {
 public:
  enum class Kind { Identity, Exponent, Table };

  static TransformSpec identity() { return TransformSpec(Kind::Identity, 0.0, {}); }
  static TransformSpec exponent(double alpha);
  static TransformSpec table(std::map<double, double> values);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }

  // Returns log f(p). Exponent(0) is the all-ones transform.
  double log_apply(double p) const;

 private:
  TransformSpec(Kind kind, double alpha, std::map<double, double> table)
      : kind_(kind), alpha_(alpha), table_(std::move(table)) {}

  Kind kind_;
  double alpha_;
  std::map<double, double> table_;
};

// Fractional allocation, column-major; every column sums to 1.
class AssignmentMatrix {
 public:
  AssignmentMatrix(int agents, int items);

  int agents() const { return m_; }
  int items() const { return n_; }

  double at(int i, int j) const { return x_[index(i, j)]; }
  double& at(int i, int j) { return x_[index(i, j)]; }

  double* column(int j) { return x_.data() + static_cast<std::size_t>(j) * m_; }
  const double* column(int j) const { return x_.data() + static_cast<std::size_t>(j) * m_; }

  double column_sum(int j) const;
  void validate_column_stochastic(double tol = 1e-12) const;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * m_ + i; }

  int m_ = 0;
  int n_ = 0;
  std::vector<double> x_;
};

}  // namespace alloclab
