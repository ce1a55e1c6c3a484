#pragma once

#include <optional>
#include <vector>

#include "drmpc/lp_problem.hpp"

namespace drmpc {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;
  std::vector<double> values;
  long iterations = 0;
};

struct SolverOptions {
  double optimality_tol = 1e-9;   // reduced-cost threshold
  double feasibility_tol = 1e-6;  // absolute row residual
  long max_iterations = 0;        // 0 = 50x the standard-form variable count
  // Starting basis: one column index per row. Used when it factorizes and
  // its basic solution is within bounds; otherwise the solver falls back to
  // the generic phase-1 start.
  std::optional<std::vector<int>> basis_hint;
};

// Deterministic bounded-variable revised simplex. Identical inputs produce
// bitwise-identical solutions. Throws std::runtime_error when the iteration
// cap is exceeded or the basis factorization breaks down numerically.
LpSolution solve(const LpProblem& problem, const SolverOptions& options = {});

struct Violation {
  enum class Kind { Row, LowerBound, UpperBound };
  Kind kind = Kind::Row;
  int index = 0;  // row index or variable index
  double residual = 0.0;
};

// Residuals above tolerance for a candidate assignment; empty means feasible.
std::vector<Violation> check_feasibility(const LpProblem& problem,
                                         const std::vector<double>& values,
                                         double row_tol = 1e-6, double bound_tol = 1e-9);

}  // namespace drmpc
