#include "premarshal/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace premarshal {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kPruneTol = 1e-6;

using Clock = std::chrono::steady_clock;

} // namespace

int first_unforced_time(const Fixings& fixings, int horizon, int num_stacks) {
  for (int t = 1; t <= horizon; ++t) {
    int fixed = 0;
    for (const auto& [key, action] : fixings)
      if (key.second == t) ++fixed;
    if (fixed < num_stacks) return t;
  }
  return horizon + 1;
}

bool is_integral(const std::vector<double>& primal) {
  return std::all_of(primal.begin(), primal.end(), [](double x) {
    return std::abs(x) <= kIntegralityTol || std::abs(x - 1.0) <= kIntegralityTol;
  });
}

std::pair<int, int> select_branching(const SearchNode& node,
                                     const NodeSolveResult& node_lp,
                                     const ColumnPool& pool, int num_stacks) {
  if (is_integral(node_lp.primal))
    throw NoFractionalChoiceError("select_branching called on integral solution");
  const int t_hat = node.t_hat;
  int best_stack = -1;
  double best_mass = -1.0;
  for (int s = 0; s < num_stacks; ++s) {
    if (node.fixings.count({s, t_hat})) continue;
    double mass = 0.0;
    for (size_t col = 0; col < node_lp.pool_ids.size(); ++col) {
      const int id = node_lp.pool_ids[col];
      if (is_dummy_id(id)) continue;
      const PricedColumn& column = pool.column(id);
      if (column.stack == s && column.has_event_at(t_hat))
        mass += node_lp.primal[col];
    }
    if (mass > best_mass + 1e-12) {
      best_mass = mass;
      best_stack = s;
    }
  }
  if (best_stack < 0)
    throw NoFractionalChoiceError("no unforced stack at the branch time point");
  return {best_stack, t_hat};
}

size_t select_next_node(const std::vector<SearchNode>& open) {
  size_t best = 0;
  for (size_t i = 1; i < open.size(); ++i) {
    const SearchNode& cand = open[i];
    const SearchNode& cur = open[best];
    if (cand.t_hat > cur.t_hat ||
        (cand.t_hat == cur.t_hat && cand.creation_index > cur.creation_index))
      best = i;
  }
  return best;
}

std::array<SearchNode, 3> expand(const SearchNode& node,
                                 std::pair<int, int> branch_point, int horizon,
                                 int num_stacks, long long& creation_counter) {
  std::array<SearchNode, 3> children;
  const FixedAction actions[3] = {FixedAction::Add, FixedAction::Remove,
                                  FixedAction::Nothing};
  for (int i = 0; i < 3; ++i) {
    SearchNode child;
    child.fixings = node.fixings;
    child.fixings[branch_point] = actions[i];
    child.depth = node.depth + 1;
    child.t_hat = first_unforced_time(child.fixings, horizon, num_stacks);
    child.creation_index = ++creation_counter;
    children[i] = std::move(child);
  }
  return children;
}

namespace {

/// Pairs the integral solution's events into a global move order and
/// validates it by replay. Loud failure on any mismatch: the branch and
/// price invariants guarantee pairing, so a miss is a bug.
Solution decode_solution(const NodeSolveResult& node_lp, const ColumnPool& pool,
                         const Instance& instance, int horizon, double root_lp) {
  struct TimeSlot {
    int add_stack = -1;
    Priority add_label = 0;
    int remove_stack = -1;
    Priority remove_label = 0;
  };
  std::map<int, TimeSlot> slots;
  for (size_t col = 0; col < node_lp.pool_ids.size(); ++col) {
    if (node_lp.primal[col] < 0.5) continue;
    const int id = node_lp.pool_ids[col];
    if (is_dummy_id(id))
      throw std::logic_error("dummy column selected in integral solution");
    const PricedColumn& column = pool.column(id);
    for (const auto& [label, t] : column.adds) {
      TimeSlot& slot = slots[t];
      if (slot.add_stack >= 0)
        throw std::logic_error("two adds at one time point in integral solution");
      slot.add_stack = column.stack;
      slot.add_label = label;
    }
    for (const auto& [label, t] : column.removes) {
      TimeSlot& slot = slots[t];
      if (slot.remove_stack >= 0)
        throw std::logic_error("two removes at one time point in integral solution");
      slot.remove_stack = column.stack;
      slot.remove_label = label;
    }
  }

  Solution solution;
  for (const auto& [t, slot] : slots) {
    if (slot.add_stack < 0 || slot.remove_stack < 0 ||
        slot.add_label != slot.remove_label)
      throw std::logic_error("unpaired add/remove at time " + std::to_string(t));
    solution.moves.push_back({slot.remove_stack, slot.add_stack, t, slot.add_label});
  }
  solution.cost = static_cast<int>(solution.moves.size());
  solution.horizon = horizon;
  solution.root_lp_value = root_lp;

  if (solution.cost != horizon)
    throw std::logic_error("integral solution cost differs from the horizon");
  const Layout final_layout = replay(instance, solution.moves);
  if (!is_target(final_layout, instance))
    throw std::logic_error("decoded solution does not reach a target lay-out");
  return solution;
}

} // namespace

SolveOutcome solve(const Instance& instance, const SolverConfig& config) {
  instance.validate();
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(config.time_limit_seconds));

  SolveOutcome outcome;
  RunStats& stats = outcome.stats;
  auto finish = [&]() {
    stats.total_time =
        std::chrono::duration<double>(Clock::now() - start).count();
    stats.trees_actually_solved = stats.trees_solved - stats.trees_killed;
  };

  if (instance.initial.total_containers() ==
          instance.num_stacks * instance.max_height &&
      !is_target(instance.initial, instance))
    throw InfeasibleInstanceError("all stacks full and lay-out not in target form");

  ColumnPool pool(instance.num_stacks);
  MasterStats master_stats;
  long long creation_counter = 0;
  auto sync_master_stats = [&]() {
    stats.lp_time = master_stats.lp_seconds;
    stats.pricing_time = master_stats.pricing_seconds;
    stats.clear_time = master_stats.clear_seconds;
    stats.sequences_generated = master_stats.columns_generated;
    stats.max_lp_columns = master_stats.max_lp_columns;
    stats.max_duality_gap = master_stats.max_duality_gap;
    stats.max_primal_residual = master_stats.max_primal_residual;
    stats.min_alpha = master_stats.min_alpha;
    stats.min_beta = master_stats.min_beta;
    stats.lp_solves = master_stats.lp_solves;
  };

  try {
    for (int horizon = lower_bound(instance.initial, instance);;
         horizon += config.horizon_increment) {
      // fresh tree for this horizon
      std::vector<SearchNode> open;
      SearchNode root;
      root.t_hat = first_unforced_time({}, horizon, instance.num_stacks);
      root.creation_index = ++creation_counter;
      open.push_back(std::move(root));
      double root_lp = 0.0;
      bool root_node = true;

      while (!open.empty()) {
        if (Clock::now() > deadline) throw TimeoutInterrupt{};
        stats.max_nodes_in_memory =
            std::max(stats.max_nodes_in_memory, static_cast<int>(open.size()));

        const size_t pick = select_next_node(open);
        SearchNode node = std::move(open[pick]);
        open.erase(open.begin() + static_cast<long>(pick));

        NodeSolveResult node_lp =
            solve_node_lp(pool, node.fixings, horizon, instance, master_stats,
                          config.master_hooks, deadline);
        ++stats.nodes_solved;
        stats.max_sequences_in_memory =
            std::max(stats.max_sequences_in_memory, pool.size());

        if (root_node) {
          root_lp = node_lp.lp_value;
          root_node = false;
        }

        if (node_lp.lp_value > horizon + kPruneTol) {
          if (node.depth == 0) {
            ++stats.trees_killed;
            open.clear(); // killed tree: only the root is ever solved
          }
        } else if (is_integral(node_lp.primal)) {
          outcome.solution =
              decode_solution(node_lp, pool, instance, horizon, root_lp);
        } else {
          if (node.t_hat > horizon)
            throw std::logic_error("fractional node with every action fixed");
          const auto branch_point =
              select_branching(node, node_lp, pool, instance.num_stacks);
          auto children = expand(node, branch_point, horizon, instance.num_stacks,
                                 creation_counter);
          for (auto& child : children) open.push_back(std::move(child));
        }

        // pool cleanup is the last step of a node iteration; node_lp's
        // pool ids are dead beyond this point
        if (stats.nodes_solved % config.cleanup_interval == 0) {
          std::vector<PricedColumn> removed = pool.clean();
          if (config.on_cleanup) {
            std::vector<const PricedColumn*> retained;
            for (int id = 0; id < pool.size(); ++id)
              retained.push_back(&pool.column(id));
            config.on_cleanup(stats.nodes_solved, removed, retained);
          }
        }

        if (outcome.solution) {
          ++stats.trees_solved;
          stats.root_lp_of_success = root_lp;
          stats.integrality_gap =
              root_lp > 0 ? outcome.solution->cost / root_lp : 1.0;
          sync_master_stats();
          finish();
          return outcome;
        }
      }
      ++stats.trees_solved;
      sync_master_stats();
    }
  } catch (const TimeoutInterrupt&) {
    outcome.timed_out = true;
    sync_master_stats();
    finish();
    return outcome;
  }
}

} // namespace premarshal
