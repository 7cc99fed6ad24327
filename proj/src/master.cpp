#include "premarshal/master.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace premarshal {

namespace {

constexpr double kUsageTol = 1e-9;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

} // namespace

StackFixings fixings_for_stack(const Fixings& fixings, int stack) {
  StackFixings slice;
  for (const auto& [key, action] : fixings)
    if (key.first == stack) slice.emplace(key.second, action);
  return slice;
}

bool column_compatible(const PricedColumn& column, const Fixings& fixings) {
  for (const auto& [key, action] : fixings) {
    if (key.first != column.stack) continue;
    const int t = key.second;
    switch (action) {
      case FixedAction::Add:
        if (!column.has_add_at(t)) return false;
        break;
      case FixedAction::Remove:
        if (!column.has_remove_at(t)) return false;
        break;
      case FixedAction::Nothing:
        if (column.has_event_at(t)) return false;
        break;
    }
  }
  return true;
}

int ColumnPool::add(PricedColumn column) {
  columns_.push_back(std::move(column));
  used_.push_back(0);
  return size() - 1;
}

std::vector<PricedColumn> ColumnPool::clean() {
  std::vector<PricedColumn> removed;
  std::vector<PricedColumn> kept;
  kept.reserve(columns_.size());
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (used_[i])
      kept.push_back(std::move(columns_[i]));
    else
      removed.push_back(std::move(columns_[i]));
  }
  columns_ = std::move(kept);
  used_.assign(columns_.size(), 0);
  return removed;
}

namespace {

/// Appends one column to the model; used for both the initial build and
/// columns generated during the node solve.
void append_column(MasterModel& model, const ColumnPool& pool, int pool_id,
                   int horizon) {
  std::vector<std::pair<int, double>> entries;
  double cost;
  int stack;
  if (is_dummy_id(pool_id)) {
    stack = dummy_stack(pool_id);
    cost = horizon + 1;
  } else {
    const PricedColumn& column = pool.column(pool_id);
    stack = column.stack;
    cost = column.true_cost;
    for (const auto& [label, t] : column.adds) {
      entries.push_back({model.row_c1(label, t), 1.0});
      entries.push_back({model.row_c2(t), 1.0});
    }
    for (const auto& [label, t] : column.removes)
      entries.push_back({model.row_c1(label, t), -1.0});
  }
  entries.push_back({model.row_c3(stack), 1.0});
  model.problem.add_column(cost, std::move(entries));
  model.pool_ids.push_back(pool_id);
}

DualPrices extract_duals(const MasterModel& model, const lp::LpResult& result,
                         const Instance& instance) {
  DualPrices duals = DualPrices::zeros(model.horizon, instance.num_priorities,
                                       instance.num_stacks);
  for (Priority label = 1; label <= instance.num_priorities; ++label)
    for (int t = 1; t <= model.horizon; ++t)
      duals.alpha[label - 1][t - 1] =
          std::max(0.0, result.duals[model.row_c1(label, t)]);
  for (int t = 1; t <= model.horizon; ++t)
    duals.beta[t - 1] = std::max(0.0, result.duals[model.row_c2(t)]);
  for (int s = 0; s < instance.num_stacks; ++s)
    duals.gamma[s] = result.duals[model.row_c3(s)];
  return duals;
}

} // namespace

MasterModel build_master(const ColumnPool& pool, const Fixings& fixings, int horizon,
                         const Instance& instance) {
  MasterModel model;
  model.horizon = horizon;
  model.num_priorities = instance.num_priorities;
  model.num_stacks = instance.num_stacks;

  for (Priority label = 1; label <= instance.num_priorities; ++label)
    for (int t = 1; t <= horizon; ++t)
      model.problem.add_row(lp::RowSense::GreaterEqual, 0.0,
                            {lp::RowTag::Kind::C1, label, t, 0});
  for (int t = 1; t <= horizon; ++t)
    model.problem.add_row(lp::RowSense::LessEqual, 1.0,
                          {lp::RowTag::Kind::C2, 0, t, 0});
  for (int s = 0; s < instance.num_stacks; ++s)
    model.problem.add_row(lp::RowSense::Equal, 1.0, {lp::RowTag::Kind::C3, 0, 0, s});

  for (int s = 0; s < instance.num_stacks; ++s) append_column(model, pool, dummy_id(s), horizon);
  for (int id = 0; id < pool.size(); ++id) {
    const PricedColumn& column = pool.column(id);
    for (const auto& [label, t] : column.adds)
      if (t > horizon) throw std::logic_error("pooled column beyond horizon");
    if (column_compatible(column, fixings)) append_column(model, pool, id, horizon);
  }
  return model;
}

NodeSolveResult solve_node_lp(ColumnPool& pool, const Fixings& fixings, int horizon,
                              const Instance& instance, MasterStats& stats,
                              const MasterHooks& hooks,
                              std::optional<std::chrono::steady_clock::time_point> deadline) {
  using clock = std::chrono::steady_clock;

  auto build_start = clock::now();
  MasterModel model = build_master(pool, fixings, horizon, instance);
  stats.clear_seconds += seconds_since(build_start);

  // dummy basis: slacks on C1/C2 rows, one dummy per C3 row
  lp::Basis basis;
  for (int row = 0; row < (instance.num_priorities + 1) * horizon; ++row)
    basis.push_back(-(row + 1));
  for (int s = 0; s < instance.num_stacks; ++s) basis.push_back(s);

  auto signature = [](const PricedColumn& column) {
    std::string sig = std::to_string(column.stack);
    for (const auto& [label, t] : column.adds)
      sig += "+" + std::to_string(label) + "@" + std::to_string(t);
    for (const auto& [label, t] : column.removes)
      sig += "-" + std::to_string(label) + "@" + std::to_string(t);
    return sig;
  };

  NodeSolveResult result;
  std::set<std::string> added_this_node;
  for (;;) {
    if (deadline && clock::now() > *deadline) throw TimeoutInterrupt{};

    auto lp_start = clock::now();
    lp::LpResult lp_result = lp::lp_solve(model.problem, &basis);
    stats.lp_seconds += seconds_since(lp_start);
    ++stats.lp_solves;
    stats.max_lp_columns = std::max(stats.max_lp_columns, model.problem.num_columns());

    if (lp_result.status == lp::LpStatus::Infeasible)
      throw std::logic_error("master LP infeasible despite dummy columns");
    if (lp_result.status == lp::LpStatus::Unbounded)
      throw std::logic_error("master LP unbounded; modeling bug");

    stats.max_duality_gap = std::max(
        stats.max_duality_gap, std::abs(lp_result.objective - lp_result.dual_objective) /
                                   (1.0 + std::abs(lp_result.objective)));
    stats.max_primal_residual = std::max(
        stats.max_primal_residual, lp::primal_residual(model.problem, lp_result.primal));
    for (Priority label = 1; label <= instance.num_priorities; ++label)
      for (int t = 1; t <= horizon; ++t)
        stats.min_alpha = std::min(stats.min_alpha, lp_result.duals[model.row_c1(label, t)]);
    for (int t = 1; t <= horizon; ++t)
      stats.min_beta = std::min(stats.min_beta, lp_result.duals[model.row_c2(t)]);

    for (int col = 0; col < model.problem.num_columns(); ++col)
      if (!is_dummy_id(model.pool_ids[col]) && lp_result.primal[col] > kUsageTol)
        pool.mark_used(model.pool_ids[col]);

    if (hooks.on_lp_solved) {
      std::vector<std::pair<const PricedColumn*, double>> view;
      for (int col = 0; col < model.problem.num_columns(); ++col)
        if (!is_dummy_id(model.pool_ids[col]))
          view.push_back({&pool.column(model.pool_ids[col]), lp_result.primal[col]});
      hooks.on_lp_solved(view);
    }

    DualPrices duals = extract_duals(model, lp_result, instance);

    auto pricing_start = clock::now();
    std::vector<PricedColumn> generated;
    for (int s = 0; s < instance.num_stacks; ++s) {
      IntervalSet intervals =
          build_intervals(s, instance, duals, fixings_for_stack(fixings, s));
      PricingOutcome outcome = solve_pricing(s, intervals, instance.max_height, duals);
      if (outcome.column) generated.push_back(std::move(*outcome.column));
    }
    stats.pricing_seconds += seconds_since(pricing_start);

    if (generated.empty()) {
      result.lp_value = lp_result.objective;
      result.primal = std::move(lp_result.primal);
      result.pool_ids = model.pool_ids;
      result.duals = std::move(duals);
      return result;
    }
    for (PricedColumn& column : generated) {
      if (!column_is_feasible(column, instance))
        throw std::logic_error("pricing produced an infeasible column");
      if (!column_compatible(column, fixings))
        throw std::logic_error("pricing produced a fixing-incompatible column");
      if (!added_this_node.insert(signature(column)).second)
        throw std::logic_error("pricing repeated a column within one node");
      const int id = pool.add(std::move(column));
      append_column(model, pool, id, horizon);
      ++stats.columns_generated;
      ++result.generated;
    }
    basis = std::move(lp_result.basis); // new columns enter nonbasic
  }
}

} // namespace premarshal
