#pragma once

#include <string>
#include <vector>

namespace premarshal::lp {

enum class RowSense { GreaterEqual, LessEqual, Equal };

/// Identifies which master constraint a row encodes. Rows created by
/// other callers use Kind::Other.
struct RowTag {
  enum class Kind { C1, C2, C3, Other };
  Kind kind = Kind::Other;
  int label = 0;
  int time = 0;
  int stack = 0;
};

/// min c.x  s.t.  rows with sense >=, <=, ==;  x >= 0.
struct LpProblem {
  struct Column {
    double cost = 0.0;
    std::vector<std::pair<int, double>> entries; // (row, coefficient)
  };

  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<RowTag> tags;
  std::vector<Column> columns;

  int num_rows() const { return static_cast<int>(senses.size()); }
  int num_columns() const { return static_cast<int>(columns.size()); }

  int add_row(RowSense sense, double rhs_value, RowTag tag = {});
  int add_column(double cost, std::vector<std::pair<int, double>> entries);

  /// Plain-text dump for cross-checking against an external solver.
  std::string dump() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Basis token for warm starts: one entry per row; entry >= 0 names a
/// structural column, entry < 0 names the slack of row (-entry - 1).
using Basis = std::vector<int>;

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  double dual_objective = 0.0;
  std::vector<double> primal; // per structural column
  /// Per-row duals, sign-normalized so they plug directly into the
  /// pricing weight formulas: >=-rows and <=-rows both report
  /// nonnegative values at optimality; ==-rows are free.
  std::vector<double> duals;
  Basis basis;
  int iterations = 0;
};

/// Revised simplex with a dense factorized basis. Deterministic for
/// identical input and warm start; Bland's rule engages on degeneracy.
LpResult lp_solve(const LpProblem& problem, const Basis* warm_start = nullptr);

/// Max feasibility violation of a primal point (for audits).
double primal_residual(const LpProblem& problem, const std::vector<double>& primal);

} // namespace premarshal::lp
