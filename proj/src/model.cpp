#include "premarshal/model.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace premarshal {

std::string to_string(Mode mode) {
  return mode == Mode::Priority ? "priority" : "configuration";
}

int Layout::total_containers() const {
  int n = 0;
  for (const auto& s : stacks) n += static_cast<int>(s.size());
  return n;
}

namespace {

std::map<Priority, int> label_counts(const Layout& layout) {
  std::map<Priority, int> counts;
  for (const auto& s : layout.stacks)
    for (Priority p : s) ++counts[p];
  return counts;
}

} // namespace

void Instance::validate() const {
  if (num_stacks < 1) throw ValidationError("num_stacks must be positive");
  if (max_height < 1) throw ValidationError("max_height must be positive");
  if (num_priorities < 1) throw ValidationError("num_priorities must be positive");
  if (initial.num_stacks() != num_stacks)
    throw ValidationError("stacks: expected " + std::to_string(num_stacks) +
                          " stacks, got " + std::to_string(initial.num_stacks()));
  for (int s = 0; s < num_stacks; ++s) {
    const auto& stack = initial.stacks[s];
    if (static_cast<int>(stack.size()) > max_height)
      throw ValidationError("stacks[" + std::to_string(s) + "]: height " +
                            std::to_string(stack.size()) + " exceeds max_height " +
                            std::to_string(max_height));
    for (size_t i = 0; i < stack.size(); ++i)
      if (stack[i] < 1 || stack[i] > num_priorities)
        throw ValidationError("stacks[" + std::to_string(s) + "][" + std::to_string(i) +
                              "]: priority " + std::to_string(stack[i]) +
                              " out of range [1," + std::to_string(num_priorities) + "]");
  }
  if (mode == Mode::Configuration) {
    if (!target) throw ValidationError("target: required in configuration mode");
    if (target->num_stacks() != num_stacks)
      throw ValidationError("target: expected " + std::to_string(num_stacks) +
                            " stacks, got " + std::to_string(target->num_stacks()));
    for (int s = 0; s < num_stacks; ++s) {
      const auto& stack = target->stacks[s];
      if (static_cast<int>(stack.size()) > max_height)
        throw ValidationError("target[" + std::to_string(s) + "]: height " +
                              std::to_string(stack.size()) + " exceeds max_height " +
                              std::to_string(max_height));
      for (size_t i = 0; i < stack.size(); ++i)
        if (stack[i] < 1 || stack[i] > num_priorities)
          throw ValidationError("target[" + std::to_string(s) + "][" + std::to_string(i) +
                                "]: priority " + std::to_string(stack[i]) +
                                " out of range [1," + std::to_string(num_priorities) + "]");
    }
    if (label_counts(initial) != label_counts(*target))
      throw ValidationError("target: container multiset differs from initial lay-out");
  } else if (target) {
    throw ValidationError("target: must be null in priority mode");
  }
}

Layout apply_move(const Layout& layout, const Move& move, int max_height) {
  const int m = layout.num_stacks();
  if (move.from_stack < 0 || move.from_stack >= m || move.to_stack < 0 ||
      move.to_stack >= m || move.from_stack == move.to_stack)
    throw MoveError(MoveErrorCode::EmptySourceStack,
                    "invalid stack indices in move");
  const auto& from = layout.stacks[move.from_stack];
  const auto& to = layout.stacks[move.to_stack];
  if (from.empty())
    throw MoveError(MoveErrorCode::EmptySourceStack,
                    "source stack " + std::to_string(move.from_stack) + " is empty");
  if (static_cast<int>(to.size()) >= max_height)
    throw MoveError(MoveErrorCode::FullTargetStack,
                    "target stack " + std::to_string(move.to_stack) + " is full");
  if (from.back() != move.priority)
    throw MoveError(MoveErrorCode::PriorityMismatch,
                    "top of stack " + std::to_string(move.from_stack) + " is " +
                        std::to_string(from.back()) + ", move says " +
                        std::to_string(move.priority));
  Layout next = layout;
  next.stacks[move.from_stack].pop_back();
  next.stacks[move.to_stack].push_back(move.priority);
  return next;
}

Layout replay(const Instance& instance, const std::vector<Move>& moves) {
  Layout layout = instance.initial;
  for (const Move& move : moves) layout = apply_move(layout, move, instance.max_height);
  return layout;
}

bool stack_is_sorted(const std::vector<Priority>& stack) {
  for (size_t i = 1; i < stack.size(); ++i)
    if (stack[i] > stack[i - 1]) return false;
  return true;
}

bool is_target(const Layout& layout, const Instance& instance) {
  if (instance.mode == Mode::Configuration) return layout == *instance.target;
  return std::all_of(layout.stacks.begin(), layout.stacks.end(), stack_is_sorted);
}

std::vector<int> wrongly_placed(const Layout& layout) {
  std::vector<int> counts;
  counts.reserve(layout.stacks.size());
  for (const auto& stack : layout.stacks) {
    // Everything strictly above the lowest container that rests above a
    // strictly higher-priority one is wrongly placed.
    int wrong = 0;
    Priority min_below = std::numeric_limits<Priority>::max();
    for (size_t i = 0; i < stack.size(); ++i) {
      if (i > 0 && stack[i] > min_below) {
        wrong = static_cast<int>(stack.size() - i);
        break;
      }
      min_below = std::min(min_below, stack[i]);
    }
    counts.push_back(wrong);
  }
  return counts;
}

int lower_bound(const Layout& layout) {
  const std::vector<int> wrong = wrongly_placed(layout);
  int total = 0;
  int min_stack = 0;
  if (!wrong.empty()) {
    min_stack = wrong[0];
    for (int w : wrong) {
      total += w;
      min_stack = std::min(min_stack, w);
    }
  }
  return total + min_stack;
}

int lower_bound(const Layout& layout, const Instance& instance) {
  if (instance.mode == Mode::Priority) return lower_bound(layout);
  // Configuration mode: per stack, containers at or above the lowest
  // position where the current and target contents differ each need at
  // least one move.
  int total = 0;
  for (int s = 0; s < layout.num_stacks(); ++s) {
    const auto& cur = layout.stacks[s];
    const auto& tgt = instance.target->stacks[s];
    size_t i = 0;
    while (i < cur.size() && i < tgt.size() && cur[i] == tgt[i]) ++i;
    total += static_cast<int>(cur.size() - std::min(i, cur.size()));
  }
  return total;
}

double mis_overlay(const Layout& layout) {
  const int n = layout.total_containers();
  if (n == 0) throw EmptyInstanceError("mis-overlay undefined for empty lay-out");
  const std::vector<int> wrong = wrongly_placed(layout);
  int total = 0;
  for (int w : wrong) total += w;
  return 100.0 * total / n;
}

std::string write_instance(const Instance& instance) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(instance.mode);
  j["num_stacks"] = instance.num_stacks;
  j["max_height"] = instance.max_height;
  j["num_priorities"] = instance.num_priorities;
  j["stacks"] = instance.initial.stacks;
  if (instance.target)
    j["target"] = instance.target->stacks;
  else
    j["target"] = nullptr;
  return j.dump() + "\n";
}

Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ValidationError(std::string("missing field: ") + key);
    return j.at(key);
  };
  Instance instance;
  const std::string mode = require("mode").get<std::string>();
  if (mode == "priority")
    instance.mode = Mode::Priority;
  else if (mode == "configuration")
    instance.mode = Mode::Configuration;
  else
    throw ValidationError("mode: expected \"priority\" or \"configuration\", got \"" +
                          mode + "\"");
  instance.num_stacks = require("num_stacks").get<int>();
  instance.max_height = require("max_height").get<int>();
  instance.num_priorities = require("num_priorities").get<int>();
  instance.initial.stacks =
      require("stacks").get<std::vector<std::vector<Priority>>>();
  const auto& target = require("target");
  if (!target.is_null()) {
    Layout t;
    t.stacks = target.get<std::vector<std::vector<Priority>>>();
    instance.target = std::move(t);
  }
  instance.validate();
  return instance;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_instance(buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write instance file: " + path);
  out << write_instance(instance);
}

} // namespace premarshal
