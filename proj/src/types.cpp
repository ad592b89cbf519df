#include "alloclab/types.hpp"

#include <algorithm>
#include <cmath>

namespace alloclab {

WeightMatrix::WeightMatrix(int agents, int items) : m_(agents), n_(items) {
  if (agents < 1 || items < 1) {
    throw Error("weight matrix needs at least one agent and one item");
  }
  values_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
  adm_.assign(static_cast<std::size_t>(m_) * n_, 0);
}

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw Error("empty weight matrix");
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.front().size());
  WeightMatrix P(m, n);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw ShapeMismatch("ragged weight rows");
    for (int j = 0; j < n; ++j) {
      if (std::isinf(rows[i][j])) {
        P.set_inadmissible(i, j);
      } else {
        P.set(i, j, rows[i][j]);
      }
    }
  }
  P.validate();
  return P;
}

void WeightMatrix::set(int i, int j, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw Error("weights must be finite and strictly positive");
  }
  values_[index(i, j)] = p;
  adm_[index(i, j)] = 1;
}

void WeightMatrix::set_inadmissible(int i, int j) {
  values_[index(i, j)] = 0.0;
  adm_[index(i, j)] = 0;
}

double WeightMatrix::row_sum(int i) const {
  double sum = 0.0;
  for (int j = 0; j < n_; ++j) {
    if (admissible(i, j)) sum += at(i, j);
  }
  return sum;
}

double WeightMatrix::min_admissible() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (adm_[k]) best = std::min(best, values_[k]);
  }
  return best;
}

double WeightMatrix::max_admissible() const {
  double best = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (adm_[k]) best = std::max(best, values_[k]);
  }
  return best;
}

double WeightMatrix::max_admissible_in_row(int i) const {
  double best = 0.0;
  for (int j = 0; j < n_; ++j) {
    if (admissible(i, j)) best = std::max(best, at(i, j));
  }
  return best;
}

bool WeightMatrix::fully_admissible() const {
  return std::all_of(adm_.begin(), adm_.end(), [](std::uint8_t a) { return a != 0; });
}

void WeightMatrix::append_items(const WeightMatrix& other) {
  if (other.m_ != m_) throw ShapeMismatch("agent counts differ");
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  adm_.insert(adm_.end(), other.adm_.begin(), other.adm_.end());
  n_ += other.n_;
}

WeightMatrix WeightMatrix::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("scale factor must be positive");
  WeightMatrix out(m_, n_);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < m_; ++i) {
      if (admissible(i, j)) out.set(i, j, at(i, j) * c);
    }
  }
  return out;
}

WeightMatrix WeightMatrix::with_delta_for_max() const {
  const double delta = 1e-12 * min_admissible();
  WeightMatrix out(m_, n_);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < m_; ++i) {
      out.set(i, j, admissible(i, j) ? at(i, j) : delta);
    }
  }
  return out;
}

void WeightMatrix::validate() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (adm_[k] && (!(values_[k] > 0.0) || !std::isfinite(values_[k]))) {
      throw Error("admissible weights must be finite and strictly positive");
    }
  }
  for (int j = 0; j < n_; ++j) {
    bool any = false;
    for (int i = 0; i < m_; ++i) any = any || admissible(i, j);
    if (!any) throw Error("item " + std::to_string(j) + " has no admissible agent");
  }
}

ParameterVector ParameterVector::from_weights(const std::vector<double>& w) {
  std::vector<double> logs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw Error("parameters must be positive");
    logs[i] = std::log(w[i]);
  }
  return ParameterVector(std::move(logs));
}

ParameterVector ParameterVector::shifted(double c) const {
  ParameterVector out = *this;
  for (double& v : out.logw) v += c;
  return out;
}

ParameterVector ParameterVector::normalized() const {
  if (logw.empty()) return *this;
  return shifted(-logw.front());
}

bool ParameterVector::equivalent_to(const ParameterVector& other, double tol) const {
  if (logw.size() != other.logw.size()) return false;
  const double shift = other.logw.front() - logw.front();
  for (std::size_t i = 0; i < logw.size(); ++i) {
    if (std::abs(logw[i] + shift - other.logw[i]) > tol) return false;
  }
  return true;
}

void ParameterVector::validate() const {
  for (double v : logw) {
    if (!std::isfinite(v)) throw Error("parameter log-values must be finite");
  }
}

TransformSpec TransformSpec::exponent(double alpha) {
  if (!std::isfinite(alpha)) throw Error("exponent must be finite");
  return TransformSpec(Kind::Exponent, alpha, {});
}

TransformSpec TransformSpec::table(std::map<double, double> values) {
  for (const auto& [p, f] : values) {
    if (!(f > 0.0) || !std::isfinite(f)) throw Error("table transform values must be positive");
  }
  return TransformSpec(Kind::Table, 0.0, std::move(values));
}

double TransformSpec::log_apply(double p) const {
  switch (kind_) {
    case Kind::Identity:
      return std::log(p);
    case Kind::Exponent:
      return alpha_ * std::log(p);
    case Kind::Table: {
      const auto it = table_.find(p);
      if (it == table_.end()) {
        throw Error("table transform has no entry for weight " + std::to_string(p));
      }
      return std::log(it->second);
    }
  }
  throw Error("unreachable transform kind");
}

AssignmentMatrix::AssignmentMatrix(int agents, int items) : m_(agents), n_(items) {
  if (agents < 1 || items < 1) throw Error("assignment needs at least one agent and one item");
  x_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
}

double AssignmentMatrix::column_sum(int j) const {
  double sum = 0.0;
  const double* col = column(j);
  for (int i = 0; i < m_; ++i) sum += col[i];
  return sum;
}

void AssignmentMatrix::validate_column_stochastic(double tol) const {
  for (int j = 0; j < n_; ++j) {
    if (std::abs(column_sum(j) - 1.0) > tol) {
      throw Error("column " + std::to_string(j) + " does not sum to 1");
    }
  }
}

}  // namespace alloclab
