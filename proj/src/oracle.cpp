#include "premarshal/oracle.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace premarshal {

Layout canonical_layout(const Layout& layout) {
  Layout canon = layout;
  std::sort(canon.stacks.begin(), canon.stacks.end());
  return canon;
}

namespace {

std::string encode(const Layout& layout) {
  std::string key;
  for (const auto& stack : layout.stacks) {
    for (Priority p : stack) key.push_back(static_cast<char>(p));
    key.push_back('\0');
  }
  return key;
}

class IterativeDeepening {
public:
  explicit IterativeDeepening(const Instance& instance)
      : instance_(instance), priority_mode_(instance.mode == Mode::Priority) {}

  std::optional<std::vector<Move>> run(int max_depth) {
    const int start = lower_bound(instance_.initial, instance_);
    for (int budget = start; budget <= max_depth; ++budget) {
      budget_ = budget;
      seen_.clear();
      path_.clear();
      if (dfs(instance_.initial, 0)) return path_;
    }
    return std::nullopt;
  }

private:
  bool dfs(const Layout& layout, int depth) {
    if (is_target(layout, instance_)) return true;
    if (depth + lower_bound(layout, instance_) > budget_) return false;
    const std::string key =
        encode(priority_mode_ ? canonical_layout(layout) : layout);
    auto [it, inserted] = seen_.try_emplace(key, depth);
    if (!inserted) {
      if (it->second <= depth) return false;
      it->second = depth;
    }
    const int m = layout.num_stacks();
    for (int from = 0; from < m; ++from) {
      if (layout.stacks[from].empty()) continue;
      bool tried_empty = false;
      for (int to = 0; to < m; ++to) {
        if (to == from) continue;
        if (static_cast<int>(layout.stacks[to].size()) >= instance_.max_height)
          continue;
        if (priority_mode_ && layout.stacks[to].empty()) {
          // empty stacks are interchangeable; only try the first one
          if (tried_empty) continue;
          tried_empty = true;
        }
        Move move{from, to, depth + 1, layout.stacks[from].back()};
        path_.push_back(move);
        if (dfs(apply_move(layout, move, instance_.max_height), depth + 1))
          return true;
        path_.pop_back();
      }
    }
    return false;
  }

  const Instance& instance_;
  const bool priority_mode_;
  int budget_ = 0;
  std::unordered_map<std::string, int> seen_;
  std::vector<Move> path_;
};

} // namespace

std::optional<Solution> solve_exact(const Instance& instance, int max_depth) {
  IterativeDeepening search(instance);
  auto moves = search.run(max_depth);
  if (!moves) return std::nullopt;
  Solution solution;
  solution.moves = std::move(*moves);
  solution.cost = static_cast<int>(solution.moves.size());
  solution.horizon = solution.cost;
  solution.root_lp_value = 0.0;
  return solution;
}

} // namespace premarshal
