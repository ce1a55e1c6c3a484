#include "drmpc/lp_problem.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace drmpc {

void LpProblem::validate() const {
  const int n = num_vars();
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    throw std::invalid_argument("bound arrays must match variable count");
  }
  for (int j = 0; j < n; ++j) {
    if (!(lower[j] <= upper[j])) {
      throw std::invalid_argument("variable " + std::to_string(j) + " has empty bound range");
    }
    if (std::isnan(objective[j])) {
      throw std::invalid_argument("objective coefficient is NaN");
    }
  }
  if (row_starts.size() != row_rhs.size() + 1 || row_sense.size() != row_rhs.size()) {
    throw std::invalid_argument("row arrays are inconsistent");
  }
  for (std::size_t k = 0; k < row_cols.size(); ++k) {
    if (row_cols[k] < 0 || row_cols[k] >= n) {
      throw std::invalid_argument("row references unknown variable " +
                                  std::to_string(row_cols[k]));
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    for (int a = row_starts[i]; a < row_starts[i + 1]; ++a) {
      for (int b = a + 1; b < row_starts[i + 1]; ++b) {
        if (row_cols[a] == row_cols[b]) {
          throw std::invalid_argument("row " + std::to_string(i) +
                                      " references variable " + std::to_string(row_cols[a]) +
                                      " twice");
        }
      }
    }
  }
}

namespace {

void write_term(std::ostream& out, double coef, int var, bool first) {
  if (coef >= 0.0 && !first) out << " + ";
  if (coef < 0.0) out << (first ? "- " : " - ");
  out << std::abs(coef) << " x" << var;
}

}  // namespace

void write_lp_format(const LpProblem& problem, std::ostream& out) {
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < problem.num_vars(); ++j) {
    if (problem.objective[j] == 0.0) continue;
    out << ' ';
    write_term(out, problem.objective[j], j, first);
    first = false;
  }
  if (first) out << " 0 x0";
  out << "\nSubject To\n";
  for (int i = 0; i < problem.num_rows(); ++i) {
    out << " c" << i << ":";
    bool row_first = true;
    for (int k = problem.row_starts[i]; k < problem.row_starts[i + 1]; ++k) {
      out << ' ';
      write_term(out, problem.row_coefs[k], problem.row_cols[k], row_first);
      row_first = false;
    }
    switch (problem.row_sense[i]) {
      case RowSense::LessEqual: out << " <= "; break;
      case RowSense::Equal: out << " = "; break;
      case RowSense::GreaterEqual: out << " >= "; break;
    }
    out << problem.row_rhs[i] << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < problem.num_vars(); ++j) {
    const double lo = problem.lower[j];
    const double up = problem.upper[j];
    if (lo == -kInfinity && up == kInfinity) {
      out << " x" << j << " free\n";
    } else if (lo == -kInfinity) {
      out << " -inf <= x" << j << " <= " << up << "\n";
    } else if (up == kInfinity) {
      out << " " << lo << " <= x" << j << "\n";
    } else {
      out << " " << lo << " <= x" << j << " <= " << up << "\n";
    }
  }
  out << "End\n";
}

}  // namespace drmpc
