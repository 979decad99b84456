#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace broadbid {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearRow {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// maximize objective . x  subject to rows and lower <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearRow> rows;
  std::vector<std::string> names;  // optional, used by to_lp_text

  int variable_count() const { return static_cast<int>(objective.size()); }
  int add_variable(double cost, double lo = 0.0, double hi = 1.0, std::string name = {});
  void add_row(std::vector<std::pair<int, double>> terms, Relation relation, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct VertexSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  // Basic variables: j < n is structural j, n + i is the slack of row i.
  std::vector<int> basis;
  int iterations = 0;
};

struct SimplexOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int max_iterations = 0;         // 0: 20 * (rows + columns) + 10000
  int stall_threshold = 50;       // degenerate pivots before Bland's rule
  int refactor_interval = 100;
};

// Bounded-variable primal simplex, two-phase, dense basis inverse, Dantzig
// pricing with a Bland fallback on stalls. Rows and objective are rescaled to
// unit max coefficient internally. Throws IterationLimitError.
VertexSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});

// Largest violation of any row or bound by `values`.
double max_violation(const LinearProgram& lp, const std::vector<double>& values);

// CPLEX-LP-like text, for debugging.
std::string to_lp_text(const LinearProgram& lp);

const char* to_string(LpStatus status);

}  // namespace broadbid
