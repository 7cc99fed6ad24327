#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "premarshal/model.hpp"

namespace premarshal {

/// Dual prices of the restricted master LP, sign-normalized so they plug
/// directly into the interval weight formulas (alpha, beta >= 0).
struct DualPrices {
  int horizon = 0;        // T
  int num_priorities = 0; // k
  std::vector<std::vector<double>> alpha; // [label-1][time-1]
  std::vector<double> beta;               // [time-1]
  std::vector<double> gamma;              // [stack]

  double alpha_at(Priority label, int time) const {
    return alpha[label - 1][time - 1];
  }
  double beta_at(int time) const { return beta[time - 1]; }

  static DualPrices zeros(int horizon, int num_priorities, int num_stacks);
};

/// Branching action fixed at one (stack, time) pair.
enum class FixedAction { Add, Remove, Nothing };

/// Fixings restricted to a single stack, keyed by time point.
using StackFixings = std::map<int, FixedAction>;

enum class IntervalKind { InitialKept, InitialRemoved, PlacedKept, PlacedRemoved };

/// One candidate container lifetime on the stack. `weight` is the
/// dual-derived part; representation and forcing offsets are carried as
/// `bonus_units` multiples of a scale larger than any achievable weight
/// spread, so the DP provably prefers complete, fixing-respecting sets.
struct LabeledInterval {
  int start = 0; // time point; <= 0 means part of the initial lay-out
  int end = 0;   // time point; > horizon means part of the final lay-out
  Priority label = 0;
  IntervalKind kind = IntervalKind::PlacedRemoved;
  double weight = 0.0;
  int bonus_units = 0;
};

struct IntervalSet {
  std::vector<LabeledInterval> intervals;
  int min_time = 0;       // -h+1
  int max_time = 0;       // T+E
  int horizon = 0;        // T
  int required_units = 0; // units any valid column must collect
  double unit_scale = 0.0;
};

/// Move sequence for one stack: the LP variable x_{s,L}.
struct PricedColumn {
  int stack = 0;
  std::vector<std::pair<Priority, int>> adds;    // (label, time), time-sorted
  std::vector<std::pair<Priority, int>> removes; // (label, time), time-sorted
  int true_cost = 0; // n(L) = |adds|
  double reduced_cost = 0.0;

  bool has_add_at(int time) const;
  bool has_remove_at(int time) const;
  bool has_event_at(int time) const { return has_add_at(time) || has_remove_at(time); }
  bool operator==(const PricedColumn&) const = default;
};

class MalformedIntervalSet : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Builds the labeled interval set for one stack. Fixings delete
/// contradicting intervals and add forcing bonuses to mandatory ones.
IntervalSet build_intervals(int stack, const Instance& instance,
                            const DualPrices& duals, const StackFixings& fixings);

struct PricingOutcome {
  /// False when no move sequence can represent the stack's initial
  /// lay-out (and, in Configuration mode, fill its target) under the
  /// fixings; only the dummy column remains possible then.
  bool representable = false;
  double best_reduced_cost = 0.0;
  /// Set iff representable and best_reduced_cost < -epsilon.
  std::optional<PricedColumn> column;
};

/// Solves the height-constrained maximum-weight non-overlapping interval
/// problem by dynamic programming and converts the optimum to a column.
PricingOutcome solve_pricing(int stack, const IntervalSet& set, int max_height,
                             const DualPrices& duals);

/// Reduced-cost threshold: a column is returned iff its reduced cost is
/// below -kReducedCostEpsilon.
inline constexpr double kReducedCostEpsilon = 1e-6;

/// Simulates the column's events against the stack's initial lay-out and
/// checks the end state is a target stack lay-out (test oracle for every
/// column the DP emits).
bool column_is_feasible(const PricedColumn& column, const Instance& instance);

/// Text dump of an interval set for inspection (one interval per line:
/// "[start,end] label kind weight units").
void dump_intervals(const IntervalSet& set, std::ostream& out);

} // namespace premarshal
