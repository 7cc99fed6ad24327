#include "premarshal/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

namespace premarshal {

DualPrices DualPrices::zeros(int horizon, int num_priorities, int num_stacks) {
  DualPrices duals;
  duals.horizon = horizon;
  duals.num_priorities = num_priorities;
  duals.alpha.assign(num_priorities, std::vector<double>(horizon, 0.0));
  duals.beta.assign(horizon, 0.0);
  duals.gamma.assign(num_stacks, 0.0);
  return duals;
}

bool PricedColumn::has_add_at(int time) const {
  return std::any_of(adds.begin(), adds.end(),
                     [&](const auto& e) { return e.second == time; });
}

bool PricedColumn::has_remove_at(int time) const {
  return std::any_of(removes.begin(), removes.end(),
                     [&](const auto& e) { return e.second == time; });
}

IntervalSet build_intervals(int stack, const Instance& instance,
                            const DualPrices& duals, const StackFixings& fixings) {
  const int T = duals.horizon;
  const int k = instance.num_priorities;
  const int h = instance.max_height;
  const bool config = instance.mode == Mode::Configuration;

  IntervalSet set;
  set.horizon = T;
  set.min_time = -h + 1;
  // Priority mode: each label owns a block of h final slots so that
  // several same-label containers can be kept on one stack without
  // colliding end points. Configuration mode: one slot per target height.
  set.max_time = config ? T + h : T + k * h;

  // Offset scale strictly above any achievable plain-weight spread, so
  // maximizing bonus units takes precedence over the duals.
  double magnitude = 0.0;
  for (const auto& row : duals.alpha)
    for (double a : row) magnitude += std::abs(a);
  for (double b : duals.beta) magnitude += std::abs(b);
  set.unit_scale = magnitude + T + 1.0;

  const auto& initial = instance.initial.stacks[stack];
  const std::vector<Priority>* target =
      config ? &instance.target->stacks[stack] : nullptr;

  auto push = [&](int a, int b, Priority label, IntervalKind kind, double weight,
                  int units) {
    set.intervals.push_back({a, b, label, kind, weight, units});
  };

  for (int i = 1; i <= static_cast<int>(initial.size()); ++i) {
    const Priority label = initial[i - 1];
    const int start = i - h;
    if (config) {
      if (i <= static_cast<int>(target->size()) && (*target)[i - 1] == label)
        push(start, T + h - i + 1, label, IntervalKind::InitialKept, 0.0, 4);
    } else {
      for (int slot = 1; slot <= h; ++slot)
        push(start, T + (label - 1) * h + slot, label, IntervalKind::InitialKept,
             0.0, 2);
    }
    for (int t = 1; t <= T; ++t)
      push(start, t, label, IntervalKind::InitialRemoved, -duals.alpha_at(label, t),
           2);
  }

  if (config) {
    for (int i = 1; i <= static_cast<int>(target->size()); ++i) {
      const Priority label = (*target)[i - 1];
      for (int t = 1; t <= T; ++t)
        push(t, T + h - i + 1, label, IntervalKind::PlacedKept,
             duals.alpha_at(label, t) - duals.beta_at(t) - 1.0, 2);
    }
  } else {
    for (Priority label = 1; label <= k; ++label)
      for (int t = 1; t <= T; ++t)
        for (int slot = 1; slot <= h; ++slot)
          push(t, T + (label - 1) * h + slot, label, IntervalKind::PlacedKept,
               duals.alpha_at(label, t) - duals.beta_at(t) - 1.0, 0);
  }

  for (Priority label = 1; label <= k; ++label)
    for (int a = 1; a < T; ++a)
      for (int b = a + 1; b <= T; ++b)
        push(a, b, label, IntervalKind::PlacedRemoved,
             duals.alpha_at(label, a) - duals.alpha_at(label, b) -
                 duals.beta_at(a) - 1.0,
             0);

  int required = 2 * static_cast<int>(initial.size());
  if (config) required += 2 * static_cast<int>(target->size());

  for (const auto& [t, action] : fixings) {
    // Fixing times are regular (1..T); initial starts are <= 0 and final
    // ends are > T, so plain equality matches only regular endpoints.
    std::erase_if(set.intervals, [&, time = t, act = action](const LabeledInterval& iv) {
      switch (act) {
        case FixedAction::Nothing: return iv.start == time || iv.end == time;
        case FixedAction::Add: return iv.end == time;
        case FixedAction::Remove: return iv.start == time;
      }
      return false;
    });
    if (action == FixedAction::Add) {
      for (auto& iv : set.intervals)
        if (iv.start == t) iv.bonus_units += 2;
      required += 2;
    } else if (action == FixedAction::Remove) {
      for (auto& iv : set.intervals)
        if (iv.end == t) iv.bonus_units += 2;
      required += 2;
    }
  }
  set.required_units = required;
  return set;
}

PricingOutcome solve_pricing(int stack, const IntervalSet& set, int max_height,
                             const DualPrices& duals) {
  const int P = set.max_time - set.min_time + 1;
  const int h = max_height;
  const int planes = h + 1;

  for (const auto& iv : set.intervals) {
    if (iv.end <= iv.start || iv.start < set.min_time || iv.end > set.max_time)
      throw MalformedIntervalSet("interval endpoints out of range");
    if (iv.bonus_units < 0) throw MalformedIntervalSet("negative bonus units");
  }

  auto dp_weight = [&](const LabeledInterval& iv) {
    return iv.weight + iv.bonus_units * set.unit_scale;
  };
  // regular endpoints become move events; among equal-weight optima the
  // DP prefers fewer events, so sorted stacks price to no-move columns
  auto event_count = [&](const LabeledInterval& iv) {
    return static_cast<int>(iv.start >= 1) + static_cast<int>(iv.end <= set.horizon);
  };

  // best interval per (start, end) pair; ties to fewer events, then the
  // smaller label
  std::vector<int> best(static_cast<size_t>(P) * P, -1);
  for (int idx = 0; idx < static_cast<int>(set.intervals.size()); ++idx) {
    const auto& iv = set.intervals[idx];
    int& slot =
        best[static_cast<size_t>(iv.start - set.min_time) * P + (iv.end - set.min_time)];
    if (slot < 0) {
      slot = idx;
      continue;
    }
    const auto& cur = set.intervals[slot];
    const double w = dp_weight(iv);
    const double cw = dp_weight(cur);
    if (w > cw || (w == cw && iv.label < cur.label)) slot = idx;
  }

  // A[a,b,j]: optimum over intervals inside [a,b] with remaining height j
  std::vector<double> value(static_cast<size_t>(P) * P * planes, 0.0);
  std::vector<int> events(static_cast<size_t>(P) * P * planes, 0);
  std::vector<int> choice(static_cast<size_t>(P) * P * planes, -1); // interval id, -1 = skip a
  auto state = [&](int a, int b, int j) {
    return (static_cast<size_t>(a) * P + b) * planes + j;
  };
  auto val = [&](int a, int b, int j) -> double {
    if (b <= a || j <= 0) return 0.0;
    return value[state(a, b, j)];
  };
  auto evs = [&](int a, int b, int j) -> int {
    if (b <= a || j <= 0) return 0;
    return events[state(a, b, j)];
  };

  for (int len = 1; len < P; ++len)
    for (int a = 0; a + len < P; ++a) {
      const int b = a + len;
      for (int j = 1; j <= h; ++j) {
        double best_value = val(a + 1, b, j);
        int best_events = evs(a + 1, b, j);
        int best_choice = -1;
        for (int c = a + 1; c <= b; ++c) {
          const int idx = best[static_cast<size_t>(a) * P + c];
          if (idx < 0) continue;
          const auto& iv = set.intervals[idx];
          const double cand =
              dp_weight(iv) + val(a + 1, c - 1, j - 1) + val(c + 1, b, j);
          const int cand_events =
              event_count(iv) + evs(a + 1, c - 1, j - 1) + evs(c + 1, b, j);
          if (cand > best_value || (cand == best_value && cand_events < best_events)) {
            best_value = cand;
            best_events = cand_events;
            best_choice = idx;
          }
        }
        value[state(a, b, j)] = best_value;
        events[state(a, b, j)] = best_events;
        choice[state(a, b, j)] = best_choice;
      }
    }

  // recover the chosen interval set
  std::vector<int> selected;
  std::vector<std::tuple<int, int, int>> work{{0, P - 1, h}};
  while (!work.empty()) {
    const auto [a, b, j] = work.back();
    work.pop_back();
    if (b <= a || j <= 0) continue;
    const int idx = choice[state(a, b, j)];
    if (idx < 0) {
      work.push_back({a + 1, b, j});
      continue;
    }
    selected.push_back(idx);
    const int c = set.intervals[idx].end - set.min_time;
    work.push_back({a + 1, c - 1, j - 1});
    work.push_back({c + 1, b, j});
  }

  PricingOutcome outcome;
  double plain_weight = 0.0;
  int units = 0;
  PricedColumn column;
  column.stack = stack;
  for (int idx : selected) {
    const auto& iv = set.intervals[idx];
    plain_weight += iv.weight;
    units += iv.bonus_units;
    if (iv.start >= 1) column.adds.push_back({iv.label, iv.start});
    if (iv.end <= set.horizon) column.removes.push_back({iv.label, iv.end});
  }
  if (units != set.required_units) return outcome; // stack not representable

  outcome.representable = true;
  auto by_time = [](const auto& x, const auto& y) { return x.second < y.second; };
  std::sort(column.adds.begin(), column.adds.end(), by_time);
  std::sort(column.removes.begin(), column.removes.end(), by_time);
  column.true_cost = static_cast<int>(column.adds.size());
  column.reduced_cost = -(plain_weight + duals.gamma[stack]);
  outcome.best_reduced_cost = column.reduced_cost;
  if (column.reduced_cost < -kReducedCostEpsilon) outcome.column = std::move(column);
  return outcome;
}

bool column_is_feasible(const PricedColumn& column, const Instance& instance) {
  const int h = instance.max_height;
  std::vector<Priority> stack = instance.initial.stacks[column.stack];

  struct Event {
    int time;
    Priority label;
    bool add;
  };
  std::vector<Event> events;
  for (const auto& [label, t] : column.adds) events.push_back({t, label, true});
  for (const auto& [label, t] : column.removes) events.push_back({t, label, false});
  std::sort(events.begin(), events.end(),
            [](const Event& x, const Event& y) { return x.time < y.time; });
  for (size_t i = 0; i + 1 < events.size(); ++i)
    if (events[i].time == events[i + 1].time) return false;
  for (const Event& event : events) {
    if (event.time < 1) return false;
    if (event.add) {
      if (static_cast<int>(stack.size()) >= h) return false;
      stack.push_back(event.label);
    } else {
      if (stack.empty() || stack.back() != event.label) return false;
      stack.pop_back();
    }
  }
  if (instance.mode == Mode::Configuration)
    return stack == instance.target->stacks[column.stack];
  return stack_is_sorted(stack);
}

void dump_intervals(const IntervalSet& set, std::ostream& out) {
  out << "time points " << set.min_time << ".." << set.max_time << ", horizon "
      << set.horizon << ", required units " << set.required_units << ", scale "
      << set.unit_scale << "\n";
  for (const auto& iv : set.intervals) {
    const char* kind = iv.kind == IntervalKind::InitialKept      ? "initial-kept"
                       : iv.kind == IntervalKind::InitialRemoved ? "initial-removed"
                       : iv.kind == IntervalKind::PlacedKept     ? "placed-kept"
                                                                 : "placed-removed";
    out << "[" << iv.start << "," << iv.end << "] label=" << iv.label << " " << kind
        << " w=" << iv.weight << " units=" << iv.bonus_units << "\n";
  }
}

} // namespace premarshal
