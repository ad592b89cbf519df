#pragma once

#include <fstream>
#include <string>

#include "alloclab/learn.hpp"
#include "alloclab/oracle.hpp"
#include "alloclab/types.hpp"

namespace alloclab::io {

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Instance files: {"m": 2, "n": 2, "weights": [[1, 2], [2, 1]]}, row-major,
// with the string "inf" marking inadmissible entries. Serialization is
// shortest-round-trip decimal, so load(save(P)) reproduces P bit-exactly.
WeightMatrix load_instance(const std::string& path);
void save_instance(const WeightMatrix& P, const std::string& path);

// Parameter files: a JSON array of m natural-log values.
ParameterVector load_params(const std::string& path);
void save_params(const ParameterVector& params, const std::string& path);

// Distribution files: {"m": 2, "items": [[{"prob": 0.5, "column": [1, 2]}, ...], ...]}.
learn::ItemDistribution load_distribution(const std::string& path);
void save_distribution(const learn::ItemDistribution& D, const std::string& path);

// Optimum files: {"value": ..., "method": "lp", "assignment": [[...]]}.
void save_opt_result(const oracle::OptResult& result, const std::string& path);
oracle::OptResult load_opt_result(const std::string& path);

std::string format_double(double v);  // shortest decimal that round-trips

// CSV with a mandatory header row, '.' decimal separator and '\n' endings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

 private:
  std::ofstream out_;
};

}  // namespace alloclab::io
