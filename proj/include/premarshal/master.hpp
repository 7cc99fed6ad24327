#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "premarshal/lp.hpp"
#include "premarshal/model.hpp"
#include "premarshal/pricing.hpp"

namespace premarshal {

/// Branching fixings of a whole search node: (stack, time) -> action.
using Fixings = std::map<std::pair<int, int>, FixedAction>;

/// Slice of the fixings that concerns one stack.
StackFixings fixings_for_stack(const Fixings& fixings, int stack);

/// True iff the column respects every fixing of its own stack:
/// Add-fixed requires an add at that time, Remove-fixed a remove,
/// Nothing-fixed forbids both.
bool column_compatible(const PricedColumn& column, const Fixings& fixings);

/// Pool of generated move sequences plus one implicit dummy per stack.
/// Dummies perform no moves, cost T+1, and are never deleted.
class ColumnPool {
public:
  explicit ColumnPool(int num_stacks) : num_stacks_(num_stacks) {}

  int num_stacks() const { return num_stacks_; }
  int size() const { return static_cast<int>(columns_.size()); }

  int add(PricedColumn column);
  const PricedColumn& column(int id) const { return columns_[id]; }
  bool used(int id) const { return used_[id] != 0; }
  void mark_used(int id) { used_[id] = 1; }

  /// Drops every column unused since the previous cleanup and resets the
  /// usage marks. Returns the removed columns.
  std::vector<PricedColumn> clean();

private:
  int num_stacks_;
  std::vector<PricedColumn> columns_;
  std::vector<char> used_;
};

/// LP column id for the dummy of `stack`; real columns use pool ids >= 0.
inline int dummy_id(int stack) { return -(stack + 1); }
inline bool is_dummy_id(int id) { return id < 0; }
inline int dummy_stack(int id) { return -id - 1; }

struct MasterModel {
  lp::LpProblem problem;
  std::vector<int> pool_ids; // per LP column: pool id or dummy_id(stack)
  int horizon = 0;
  int num_priorities = 0;
  int num_stacks = 0;

  int row_c1(Priority label, int time) const {
    return (label - 1) * horizon + (time - 1);
  }
  int row_c2(int time) const { return num_priorities * horizon + (time - 1); }
  int row_c3(int stack) const { return (num_priorities + 1) * horizon + stack; }
};

/// Builds the restricted master LP over the fixings-compatible pool
/// columns (dummies always included): rows C1 for all (label, time),
/// C2 per time, C3 per stack; objective n(L), dummy cost T+1.
MasterModel build_master(const ColumnPool& pool, const Fixings& fixings, int horizon,
                         const Instance& instance);

struct MasterStats {
  double lp_seconds = 0.0;
  double pricing_seconds = 0.0;
  double clear_seconds = 0.0;
  long long columns_generated = 0;
  long long lp_solves = 0;
  int max_lp_columns = 0;
  // audit trail for the LP kernel, aggregated over every solve
  double max_duality_gap = 0.0; // relative: |obj - dual| / (1 + |obj|)
  double max_primal_residual = 0.0;
  double min_alpha = 0.0;
  double min_beta = 0.0;
};

struct MasterHooks {
  /// Called after every LP solve with the non-dummy columns and values.
  std::function<void(const std::vector<std::pair<const PricedColumn*, double>>&)>
      on_lp_solved;
};

class TimeoutInterrupt {};

struct NodeSolveResult {
  double lp_value = 0.0;
  std::vector<double> primal;  // per LP column of `pool_ids`
  std::vector<int> pool_ids;   // snapshot of the model's column map
  DualPrices duals;
  int generated = 0;
};

/// Price-and-resolve loop for one node: solves the restricted master,
/// prices at most one new column per stack per iteration, and repeats
/// until no stack yields a column with reduced cost below -epsilon.
/// Generated columns are appended to the pool. Throws TimeoutInterrupt
/// when `deadline` passes.
NodeSolveResult solve_node_lp(
    ColumnPool& pool, const Fixings& fixings, int horizon, const Instance& instance,
    MasterStats& stats, const MasterHooks& hooks = {},
    std::optional<std::chrono::steady_clock::time_point> deadline = {});

} // namespace premarshal
