#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "premarshal/master.hpp"
#include "premarshal/model.hpp"

namespace premarshal {

struct SearchNode {
  Fixings fixings;
  int depth = 0;
  int t_hat = 1; // minimum not-fully-forced time point at creation
  long long creation_index = 0;
};

struct RunStats {
  int trees_solved = 0;
  int trees_killed = 0;          // root LP value already above T
  int trees_actually_solved = 0; // trees_solved - trees_killed
  long long nodes_solved = 0;
  int max_nodes_in_memory = 0;
  long long sequences_generated = 0;
  int max_sequences_in_memory = 0;
  int max_lp_columns = 0;
  double lp_time = 0.0;
  double pricing_time = 0.0;
  double clear_time = 0.0;
  double total_time = 0.0;
  double root_lp_of_success = 0.0;
  double integrality_gap = 0.0; // cost / root_lp_of_success
  // LP kernel audit, aggregated over every solve of the run
  double max_duality_gap = 0.0;
  double max_primal_residual = 0.0;
  double min_alpha = 0.0;
  double min_beta = 0.0;
  long long lp_solves = 0;
};

class InfeasibleInstanceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NoFractionalChoiceError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct SolverConfig {
  double time_limit_seconds = 3600.0;
  /// Horizon increment per outer iteration. Values above 1 can skip
  /// horizons, so the first solution found is no longer guaranteed
  /// optimal; off by default.
  int horizon_increment = 1;
  /// Pool cleanup period in solved nodes (run-wide counter).
  long long cleanup_interval = 100;
  MasterHooks master_hooks;
  /// Called right after each pool cleanup with the run-wide node count,
  /// the removed columns, and the retained non-dummy columns.
  std::function<void(long long nodes_solved, const std::vector<PricedColumn>& removed,
                     const std::vector<const PricedColumn*>& retained)>
      on_cleanup;
};

struct SolveOutcome {
  std::optional<Solution> solution; // empty iff timed out
  bool timed_out = false;
  RunStats stats;
};

/// Whole procedure: horizons T from the lower bound upward, one
/// branch-and-price tree per horizon, until an integral solution appears.
SolveOutcome solve(const Instance& instance, const SolverConfig& config = {});

/// Smallest time point at which at least one stack has no fixed action.
/// Returns horizon+1 when every (stack, time) pair is fixed.
int first_unforced_time(const Fixings& fixings, int horizon, int num_stacks);

/// Branching rule: at the node's t_hat, the unforced stack with maximum
/// summed fractional move mass; ties to the lowest stack index.
/// Throws NoFractionalChoiceError if the LP solution is integral.
std::pair<int, int> select_branching(const SearchNode& node,
                                     const NodeSolveResult& node_lp,
                                     const ColumnPool& pool, int num_stacks);

/// Index of the open node with maximum t_hat, ties to the most recently
/// created one.
size_t select_next_node(const std::vector<SearchNode>& open);

/// Three children with Add / Remove / Nothing fixed at the branch point.
std::array<SearchNode, 3> expand(const SearchNode& node,
                                 std::pair<int, int> branch_point, int horizon,
                                 int num_stacks, long long& creation_counter);

/// True iff every LP value is within 1e-6 of 0 or 1.
bool is_integral(const std::vector<double>& primal);

} // namespace premarshal
