#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace premarshal {

/// Priority label. Lower number = needed earlier = higher priority level.
using Priority = int;

enum class Mode { Priority, Configuration };

std::string to_string(Mode mode);

/// Stacks of priority labels, each listed bottom-to-top.
struct Layout {
  std::vector<std::vector<Priority>> stacks;

  int num_stacks() const { return static_cast<int>(stacks.size()); }
  int total_containers() const;
  bool operator==(const Layout&) const = default;
};

/// Relocation of the top container of one stack onto another.
struct Move {
  int from_stack = 0;
  int to_stack = 0;
  int time = 0;          // 1-based time point
  Priority priority = 0; // label of the container moved

  bool operator==(const Move&) const = default;
};

struct Instance {
  Mode mode = Mode::Priority;
  int num_stacks = 0;    // m
  int max_height = 0;    // h
  int num_priorities = 0; // k
  Layout initial;
  std::optional<Layout> target; // required iff mode == Configuration

  /// Throws ValidationError if any invariant is violated.
  void validate() const;
};

struct Solution {
  std::vector<Move> moves;
  int cost = 0;            // == moves.size()
  int horizon = 0;         // T of the successful tree
  double root_lp_value = 0.0;
};

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class MoveErrorCode { EmptySourceStack, FullTargetStack, PriorityMismatch };

class MoveError : public std::runtime_error {
public:
  MoveError(MoveErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  MoveErrorCode code() const { return code_; }

private:
  MoveErrorCode code_;
};

class EmptyInstanceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Executes one move and returns the resulting lay-out.
/// Throws MoveError if the move is illegal in `layout`.
Layout apply_move(const Layout& layout, const Move& move, int max_height);

/// Replays a move list from the instance's initial lay-out, validating
/// every step. Throws MoveError on the first illegal move.
Layout replay(const Instance& instance, const std::vector<Move>& moves);

/// True iff `layout` is acceptable as a final lay-out for the instance:
/// every stack non-increasing bottom-up (Priority mode), or equal to the
/// prescribed target (Configuration mode).
bool is_target(const Layout& layout, const Instance& instance);

/// True iff `stack` is sorted non-increasing bottom-up.
bool stack_is_sorted(const std::vector<Priority>& stack);

/// Per-stack count of wrongly placed containers: a container is wrongly
/// placed if it rests (anywhere) above a container of strictly higher
/// priority (lower number) or above a wrongly placed container.
std::vector<int> wrongly_placed(const Layout& layout);

/// Total wrongly placed containers plus the minimum per-stack count.
/// Valid lower bound on the number of moves (Priority mode).
int lower_bound(const Layout& layout);

/// Mode-aware bound: Priority mode as above; Configuration mode counts,
/// per stack, the containers at or above the lowest position where the
/// current and target stack contents differ.
int lower_bound(const Layout& layout, const Instance& instance);

/// 100 * wrongly placed / total containers. Throws EmptyInstanceError
/// when the lay-out holds no containers.
double mis_overlay(const Layout& layout);

/// Instance file I/O. Canonical single-line JSON, LF-terminated:
/// {"mode":...,"num_stacks":m,"max_height":h,"num_priorities":k,
///  "stacks":[[bottom,...,top],...],"target":[[...],...]|null}
std::string write_instance(const Instance& instance);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

} // namespace premarshal
