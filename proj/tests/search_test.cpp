#include "doctest.h"

#include "premarshal/oracle.hpp"
#include "premarshal/search.hpp"
#include "support/test_support.hpp"

using namespace premarshal;

TEST_CASE("select_next_node prefers deep then recent nodes") {
  std::vector<SearchNode> open(2);
  open[0].t_hat = 3;
  open[0].creation_index = 1;
  open[1].t_hat = 5;
  open[1].creation_index = 0;
  CHECK(select_next_node(open) == 1);

  open[1].t_hat = 3;
  open[0].creation_index = 7;
  open[1].creation_index = 9;
  CHECK(select_next_node(open) == 1);

  open.resize(1);
  CHECK(select_next_node(open) == 0);
}

TEST_CASE("expand fixes one action per child") {
  SearchNode root;
  root.t_hat = 1;
  long long counter = 0;
  auto children = expand(root, {0, 1}, 3, 2, counter);
  CHECK(children[0].fixings.at({0, 1}) == FixedAction::Add);
  CHECK(children[1].fixings.at({0, 1}) == FixedAction::Remove);
  CHECK(children[2].fixings.at({0, 1}) == FixedAction::Nothing);
  for (const auto& child : children) {
    CHECK(child.fixings.size() == 1);
    CHECK(child.depth == 1);
    CHECK(child.t_hat == 1); // stack 1 still unforced at t=1
    CHECK(child.creation_index > 0);
  }
}

TEST_CASE("t_hat moves on once every stack is forced") {
  Fixings fixings{{{0, 1}, FixedAction::Add}, {{1, 1}, FixedAction::Nothing}};
  CHECK(first_unforced_time(fixings, 3, 2) == 2);
  CHECK(first_unforced_time({}, 3, 2) == 1);
  Fixings all;
  for (int s = 0; s < 2; ++s)
    for (int t = 1; t <= 3; ++t) all[{s, t}] = FixedAction::Nothing;
  CHECK(first_unforced_time(all, 3, 2) == 4);
}

TEST_CASE("select_branching picks the stack with the largest move mass") {
  ColumnPool pool(3);
  PricedColumn moving0;
  moving0.stack = 0;
  moving0.removes = {{1, 1}};
  PricedColumn moving1;
  moving1.stack = 1;
  moving1.adds = {{1, 1}};
  moving1.true_cost = 1;
  PricedColumn idle2;
  idle2.stack = 2;
  const int id0 = pool.add(moving0);
  const int id1 = pool.add(moving1);
  const int id2 = pool.add(idle2);

  SearchNode node;
  node.t_hat = 1;
  NodeSolveResult lp;
  lp.pool_ids = {id0, id1, id2};
  lp.primal = {0.5, 0.4, 0.6};
  CHECK(select_branching(node, lp, pool, 3) == std::pair<int, int>{0, 1});

  lp.primal = {0.5, 0.5, 0.5};
  CHECK(select_branching(node, lp, pool, 3) == std::pair<int, int>{0, 1}); // tie

  node.fixings[{0, 1}] = FixedAction::Remove; // stack 0 forced away
  CHECK(select_branching(node, lp, pool, 3) == std::pair<int, int>{1, 1});

  lp.primal = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(select_branching(node, lp, pool, 3), NoFractionalChoiceError);
}

TEST_CASE("sorted instance solves with zero moves in one tree") {
  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = 2;
  instance.max_height = 3;
  instance.num_priorities = 3;
  instance.initial.stacks = {{3, 2, 1}, {}};
  instance.validate();
  SolveOutcome outcome = solve(instance);
  REQUIRE(outcome.solution);
  CHECK(outcome.solution->cost == 0);
  CHECK(outcome.solution->horizon == 0);
  CHECK(outcome.stats.trees_solved == 1);
  CHECK(outcome.stats.trees_killed == 0);
  CHECK(outcome.stats.integrality_gap == doctest::Approx(1.0));
}

TEST_CASE("single move instance") {
  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = 2;
  instance.max_height = 2;
  instance.num_priorities = 2;
  instance.initial.stacks = {{1, 2}, {}};
  instance.validate();
  SolveOutcome outcome = solve(instance);
  REQUIRE(outcome.solution);
  CHECK(outcome.solution->cost == 1);
  CHECK(outcome.solution->moves[0] == Move{0, 1, 1, 2});
  CHECK(is_target(replay(instance, outcome.solution->moves), instance));
}

TEST_CASE("solver matches the exact oracle on random instances") {
  RngStream rng(777);
  int solved = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 3 + static_cast<int>(rng.next_below(2));
    const int h = 3 + static_cast<int>(rng.next_below(2));
    const int k = 1 + static_cast<int>(rng.next_below(4));
    const int n = 3 + static_cast<int>(rng.next_below(6)); // 3..8
    Instance instance = testing::random_instance(rng, m, h, k, n);
    auto exact = solve_exact(instance, 15);
    REQUIRE(exact); // plenty of space at these sizes
    SolveOutcome outcome = solve(instance);
    REQUIRE(outcome.solution);
    CHECK(outcome.solution->cost == exact->cost);
    CHECK(outcome.solution->cost == outcome.solution->horizon);
    CHECK(is_target(replay(instance, outcome.solution->moves), instance));
    CHECK(outcome.stats.integrality_gap >= 1.0 - 1e-9);
    CHECK(outcome.stats.trees_solved ==
          outcome.stats.trees_killed + outcome.stats.trees_actually_solved);
    ++solved;
  }
  CHECK(solved == 30);
}

TEST_CASE("solver handles configuration mode") {
  RngStream rng(888);
  for (int trial = 0; trial < 10; ++trial) {
    Instance base = testing::random_instance(rng, 3, 3, 3, 5);
    Instance config = derive_target(base);
    auto exact = solve_exact(config, 15);
    SolveOutcome outcome = solve(config, {.time_limit_seconds = 60});
    if (exact) {
      REQUIRE(outcome.solution);
      CHECK(outcome.solution->cost == exact->cost);
      CHECK(replay(config, outcome.solution->moves) == *config.target);
    } else {
      CHECK(outcome.timed_out);
    }
  }
}

TEST_CASE("runs are deterministic") {
  RngStream rng(999);
  Instance instance = testing::random_instance(rng, 3, 4, 3, 7);
  SolveOutcome first = solve(instance);
  SolveOutcome second = solve(instance);
  REQUIRE(first.solution.has_value() == second.solution.has_value());
  if (first.solution) {
    CHECK(first.solution->moves == second.solution->moves);
    CHECK(first.stats.nodes_solved == second.stats.nodes_solved);
    CHECK(first.stats.sequences_generated == second.stats.sequences_generated);
  }
}

TEST_CASE("zero time limit reports a timeout with stats") {
  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = 2;
  instance.max_height = 2;
  instance.num_priorities = 2;
  instance.initial.stacks = {{1, 2}, {}};
  instance.validate();
  SolveOutcome outcome = solve(instance, {.time_limit_seconds = 0.0});
  CHECK(outcome.timed_out);
  CHECK_FALSE(outcome.solution);
}

TEST_CASE("a full unsorted bay is infeasible") {
  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = 2;
  instance.max_height = 1;
  instance.num_priorities = 2;
  instance.initial.stacks = {{1}, {2}};
  instance.validate();
  CHECK(is_target(instance.initial, instance)); // sorted singles are fine
  instance.max_height = 2;
  instance.initial.stacks = {{1, 2}, {2, 1}};
  CHECK_THROWS_AS(solve(instance), InfeasibleInstanceError);
}

TEST_CASE("cleanup fires on the run-wide node counter") {
  RngStream rng(4242);
  // find a deterministic instance needing a few hundred nodes
  SolverConfig config;
  config.cleanup_interval = 7; // small period to exercise the path
  std::vector<long long> fired_at;
  config.on_cleanup = [&](long long nodes, const std::vector<PricedColumn>&,
                          const std::vector<const PricedColumn*>&) {
    fired_at.push_back(nodes);
  };
  Instance instance = testing::random_instance(rng, 3, 4, 4, 8);
  SolveOutcome outcome = solve(instance, config);
  REQUIRE(outcome.solution);
  for (size_t i = 0; i < fired_at.size(); ++i)
    CHECK(fired_at[i] == static_cast<long long>(7 * (i + 1)));
  if (outcome.stats.nodes_solved >= 7) CHECK(!fired_at.empty());
}
