#pragma once

#include <optional>

#include "premarshal/model.hpp"

namespace premarshal {

/// Brute-force exact solver: iterative-deepening depth-first search over
/// move sequences with lower-bound and transposition pruning. Ground
/// truth for small instances (guard: m*h <= 20 recommended).
///
/// Returns a minimum-move solution, or nullopt if no solution with at
/// most `max_depth` moves exists.
std::optional<Solution> solve_exact(const Instance& instance, int max_depth);

/// Lay-out with stacks sorted lexicographically. In Priority mode two
/// lay-outs with equal canonical forms have equal distance to target.
Layout canonical_layout(const Layout& layout);

} // namespace premarshal
