#include "doctest.h"

#include "premarshal/generator.hpp"
#include "premarshal/model.hpp"
#include "premarshal/oracle.hpp"
#include "support/test_support.hpp"

using namespace premarshal;

TEST_CASE("solve_exact handles trivial instances") {
  Instance sorted;
  sorted.mode = Mode::Priority;
  sorted.num_stacks = 2;
  sorted.max_height = 3;
  sorted.num_priorities = 3;
  sorted.initial.stacks = {{3, 2, 1}, {}};
  auto solution = solve_exact(sorted, 10);
  REQUIRE(solution);
  CHECK(solution->cost == 0);

  Instance one_move;
  one_move.mode = Mode::Priority;
  one_move.num_stacks = 2;
  one_move.max_height = 2;
  one_move.num_priorities = 2;
  one_move.initial.stacks = {{1, 2}, {}};
  solution = solve_exact(one_move, 10);
  REQUIRE(solution);
  CHECK(solution->cost == 1);
}

TEST_CASE("solve_exact returns nothing when the depth budget is too small") {
  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = 2;
  instance.max_height = 3;
  instance.num_priorities = 2;
  instance.initial.stacks = {{1, 2}, {1, 2}};
  CHECK_FALSE(solve_exact(instance, 1));
}

TEST_CASE("pruned oracle equals the unpruned breadth-first search") {
  RngStream rng(13);
  int solvable = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_below(2)); // 2..3
    const int h = 2 + static_cast<int>(rng.next_below(2)); // 2..3
    const int k = 1 + static_cast<int>(rng.next_below(3));
    const int n = static_cast<int>(rng.next_below(m * h)); // leave one slot
    Instance instance = testing::random_instance(rng, m, h, k, n);
    auto expected = testing::bfs_distance(instance);
    auto solution = solve_exact(instance, 20);
    REQUIRE(expected.has_value() == solution.has_value());
    if (expected) {
      CHECK(solution->cost == *expected);
      ++solvable;
      // replays to a target lay-out
      CHECK(is_target(replay(instance, solution->moves), instance));
      // never beats the combinatorial bound
      CHECK(solution->cost >= lower_bound(instance.initial, instance));
    }
  }
  CHECK(solvable > 50);
}

TEST_CASE("pruned and unpruned search agree on the unsolvable twin stacks") {
  // with two stacks of height 3 no sorted lay-out is reachable from
  // [[1,2],[1,2]]; both searches must report that
  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = 2;
  instance.max_height = 3;
  instance.num_priorities = 2;
  instance.initial.stacks = {{1, 2}, {1, 2}};
  CHECK_FALSE(testing::bfs_distance(instance).has_value());
  CHECK_FALSE(solve_exact(instance, 10).has_value());

  // a third stack makes it solvable
  instance.num_stacks = 3;
  instance.initial.stacks = {{1, 2}, {1, 2}, {}};
  auto expected = testing::bfs_distance(instance);
  auto solution = solve_exact(instance, 10);
  REQUIRE(expected);
  REQUIRE(solution);
  CHECK(solution->cost == *expected);
  CHECK(solution->cost >= lower_bound(instance.initial));
}

TEST_CASE("oracle handles configuration mode") {
  RngStream rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Instance base = testing::random_instance(rng, 3, 3, 3, 5);
    Instance config = derive_target(base);
    auto expected = testing::bfs_distance(config);
    auto solution = solve_exact(config, 25);
    REQUIRE(expected.has_value() == solution.has_value());
    if (expected) {
      CHECK(solution->cost == *expected);
      CHECK(replay(config, solution->moves) == *config.target);
    }
  }
}

TEST_CASE("canonical_layout sorts stacks and is idempotent") {
  Layout layout{{{2, 1}, {}, {1}}};
  Layout canon = canonical_layout(layout);
  CHECK(canon == Layout{{{}, {1}, {2, 1}}});
  CHECK(canonical_layout(canon) == canon);
}
