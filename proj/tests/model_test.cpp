#include "doctest.h"

#include "premarshal/generator.hpp"
#include "premarshal/model.hpp"
#include "support/test_support.hpp"

using namespace premarshal;

namespace {

Instance random_small(RngStream& rng) {
  const int m = 2 + static_cast<int>(rng.next_below(3));
  const int h = 2 + static_cast<int>(rng.next_below(3));
  const int k = 1 + static_cast<int>(rng.next_below(4));
  const int n = static_cast<int>(rng.next_below(m * h + 1));
  return testing::random_instance(rng, m, h, k, n);
}

Instance priority_instance(int max_height, std::vector<std::vector<Priority>> stacks,
                           int num_priorities = 0) {
  Instance instance;
  instance.mode = Mode::Priority;
  instance.num_stacks = static_cast<int>(stacks.size());
  instance.max_height = max_height;
  instance.initial.stacks = std::move(stacks);
  int max_label = 1;
  for (const auto& s : instance.initial.stacks)
    for (Priority p : s) max_label = std::max(max_label, p);
  instance.num_priorities = num_priorities ? num_priorities : max_label;
  instance.validate();
  return instance;
}

} // namespace

TEST_CASE("apply_move relocates the top container") {
  Layout layout{{{1, 2}, {}}};
  Layout result = apply_move(layout, {0, 1, 1, 2}, 2);
  CHECK(result == Layout{{{1}, {2}}});

  Layout twin{{{3}, {3}}};
  CHECK(apply_move(twin, {0, 1, 1, 3}, 2) == Layout{{{}, {3, 3}}});
}

TEST_CASE("apply_move rejects illegal moves") {
  Layout layout{{{1}, {2}}};
  CHECK_THROWS_AS(apply_move(layout, {0, 1, 1, 1}, 1), MoveError); // height bound
  try {
    apply_move(layout, {0, 1, 1, 1}, 1);
  } catch (const MoveError& e) {
    CHECK(e.code() == MoveErrorCode::FullTargetStack);
  }
  Layout with_gap{{{}, {2}}};
  try {
    apply_move(with_gap, {0, 1, 1, 1}, 3);
    FAIL("expected MoveError");
  } catch (const MoveError& e) {
    CHECK(e.code() == MoveErrorCode::EmptySourceStack);
  }
  try {
    apply_move(layout, {0, 1, 1, 9}, 3);
    FAIL("expected MoveError");
  } catch (const MoveError& e) {
    CHECK(e.code() == MoveErrorCode::PriorityMismatch);
  }
}

TEST_CASE("apply_move followed by its reverse restores the lay-out") {
  RngStream rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Instance instance = random_small(rng);
    const Layout& layout = instance.initial;
    for (int from = 0; from < layout.num_stacks(); ++from) {
      if (layout.stacks[from].empty()) continue;
      for (int to = 0; to < layout.num_stacks(); ++to) {
        if (to == from) continue;
        if (static_cast<int>(layout.stacks[to].size()) >= instance.max_height)
          continue;
        const Priority top = layout.stacks[from].back();
        Layout moved = apply_move(layout, {from, to, 1, top}, instance.max_height);
        Layout back = apply_move(moved, {to, from, 2, top}, instance.max_height);
        CHECK(back == layout);
      }
    }
  }
}

TEST_CASE("is_target matches the sortedness/target definition") {
  Instance sorted = priority_instance(3, {{3, 2, 1}, {}});
  CHECK(is_target(sorted.initial, sorted));

  Instance unsorted = priority_instance(2, {{1, 2}});
  CHECK_FALSE(is_target(unsorted.initial, unsorted));

  Instance config;
  config.mode = Mode::Configuration;
  config.num_stacks = 2;
  config.max_height = 1;
  config.num_priorities = 2;
  config.initial.stacks = {{2}, {1}};
  config.target = Layout{{{1}, {2}}};
  config.validate();
  CHECK_FALSE(is_target(config.initial, config));
  CHECK(is_target(*config.target, config));
}

TEST_CASE("wrongly_placed counts everything above the lowest violation") {
  CHECK(wrongly_placed({{{3, 2, 1}}}) == std::vector<int>{0});
  CHECK(wrongly_placed({{{1, 2}}}) == std::vector<int>{1});
  CHECK(wrongly_placed({{{2, 3, 1}}}) == std::vector<int>{2});
  CHECK(wrongly_placed({{{3, 1, 2}}}) == std::vector<int>{1});
  CHECK(wrongly_placed({{{2, 2, 2}}}) == std::vector<int>{0});
}

TEST_CASE("lower_bound adds the minimum stack count") {
  CHECK(lower_bound({{{3, 2, 1}, {}}}) == 0);
  CHECK(lower_bound({{{1, 2}, {}}}) == 1);
  CHECK(lower_bound({{{1, 2}, {1, 2}}}) == 3);
}

TEST_CASE("lower_bound is zero exactly on target lay-outs") {
  RngStream rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Instance instance = random_small(rng);
    CHECK((lower_bound(instance.initial) == 0) ==
          is_target(instance.initial, instance));
  }
}

TEST_CASE("configuration lower_bound counts containers above the first difference") {
  Instance config;
  config.mode = Mode::Configuration;
  config.num_stacks = 2;
  config.max_height = 3;
  config.num_priorities = 3;
  config.initial.stacks = {{1, 2, 3}, {}};
  config.target = Layout{{{1}, {3, 2}}};
  config.validate();
  // stack 0: differs from height 2 upward -> 2; stack 1: empty prefix -> 0
  CHECK(lower_bound(config.initial, config) == 2);
  CHECK(lower_bound(*config.target, config) == 0);
}

TEST_CASE("mis_overlay is the wrongly placed percentage") {
  CHECK(mis_overlay({{{1, 2}}}) == doctest::Approx(50.0));
  CHECK(mis_overlay({{{3, 2, 1}}}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mis_overlay({{{}, {}}}), EmptyInstanceError);
}

TEST_CASE("container multiset is preserved by replay") {
  Instance instance = priority_instance(3, {{2, 1}, {3}, {}});
  std::vector<Move> moves{{0, 2, 1, 1}, {1, 0, 2, 3}, {2, 1, 3, 1}};
  Layout result = replay(instance, moves);
  auto count = [](const Layout& l, Priority p) {
    int c = 0;
    for (const auto& s : l.stacks)
      for (Priority q : s) c += q == p;
    return c;
  };
  for (Priority p = 1; p <= 3; ++p)
    CHECK(count(result, p) == count(instance.initial, p));
}

TEST_CASE("instance JSON round-trips byte-identically") {
  Instance instance = priority_instance(4, {{1, 2}, {3}, {}}, 6);
  const std::string text = write_instance(instance);
  CHECK(text ==
        "{\"mode\":\"priority\",\"num_stacks\":3,\"max_height\":4,"
        "\"num_priorities\":6,\"stacks\":[[1,2],[3],[]],\"target\":null}\n");
  Instance parsed = parse_instance(text);
  CHECK(write_instance(parsed) == text);
}

TEST_CASE("instance parser reports the offending field") {
  CHECK_THROWS_WITH_AS(
      parse_instance("{\"mode\":\"priority\",\"num_stacks\":1,\"max_height\":2,"
                     "\"num_priorities\":2,\"stacks\":[[1,7]],\"target\":null}"),
      "stacks[0][1]: priority 7 out of range [1,2]", ValidationError);
  CHECK_THROWS_AS(parse_instance("{"), ValidationError);
  CHECK_THROWS_AS(
      parse_instance("{\"mode\":\"priority\",\"num_stacks\":1,\"max_height\":1,"
                     "\"num_priorities\":1,\"stacks\":[[1,1]],\"target\":null}"),
      ValidationError); // stack above max_height
  CHECK_THROWS_AS(
      parse_instance("{\"mode\":\"configuration\",\"num_stacks\":1,\"max_height\":2,"
                     "\"num_priorities\":2,\"stacks\":[[1,2]],\"target\":[[1,1]]}"),
      ValidationError); // target multiset mismatch
  CHECK_THROWS_AS(
      parse_instance("{\"mode\":\"configuration\",\"num_stacks\":1,\"max_height\":2,"
                     "\"num_priorities\":2,\"stacks\":[[1,2]],\"target\":null}"),
      ValidationError); // configuration requires target
}
