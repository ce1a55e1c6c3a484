#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace drmpc {

enum class RowSense { LessEqual, Equal, GreaterEqual };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Sparse linear minimization problem with per-variable bounds. Rows are
// stored flattened (CSR) to keep construction cheap for the large
// deterministic-equivalent programs.
struct LpProblem {
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;

  std::vector<int> row_starts{0};
  std::vector<int> row_cols;
  std::vector<double> row_coefs;
  std::vector<RowSense> row_sense;
  std::vector<double> row_rhs;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(row_rhs.size()); }

  int add_variable(double lo, double up, double cost = 0.0) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(up);
    return num_vars() - 1;
  }

  void add_row(const std::vector<int>& cols, const std::vector<double>& coefs, RowSense sense,
               double rhs) {
    row_cols.insert(row_cols.end(), cols.begin(), cols.end());
    row_coefs.insert(row_coefs.end(), coefs.begin(), coefs.end());
    row_starts.push_back(static_cast<int>(row_cols.size()));
    row_sense.push_back(sense);
    row_rhs.push_back(rhs);
  }

  // Throws std::invalid_argument when indices or dimensions are inconsistent.
  void validate() const;
};

// Writes the problem in CPLEX LP text format for cross-checking against
// external solvers.
void write_lp_format(const LpProblem& problem, std::ostream& out);

}  // namespace drmpc
