#include "doctest.h"

#include <cmath>

#include "premarshal/generator.hpp"
#include "premarshal/lp.hpp"

using namespace premarshal;
using namespace premarshal::lp;

TEST_CASE("single bound: min x s.t. x >= 3") {
  LpProblem problem;
  const int row = problem.add_row(RowSense::GreaterEqual, 3.0);
  problem.add_column(1.0, {{row, 1.0}});
  LpResult result = lp_solve(problem);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK(result.objective == doctest::Approx(3.0));
  CHECK(result.primal[0] == doctest::Approx(3.0));
  CHECK(result.duals[row] == doctest::Approx(1.0));
  CHECK(result.dual_objective == doctest::Approx(3.0));
}

TEST_CASE("degenerate objective: min 0 s.t. x + y = 1") {
  LpProblem problem;
  const int row = problem.add_row(RowSense::Equal, 1.0);
  problem.add_column(0.0, {{row, 1.0}});
  problem.add_column(0.0, {{row, 1.0}});
  LpResult result = lp_solve(problem);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK(result.objective == doctest::Approx(0.0));
  CHECK(result.primal[0] + result.primal[1] == doctest::Approx(1.0));
}

TEST_CASE("dominant column drives out the dummy") {
  // one stack, T=4: dummy cost T+1 vs a free no-move column
  LpProblem problem;
  const int c3 = problem.add_row(RowSense::Equal, 1.0);
  problem.add_column(5.0, {{c3, 1.0}}); // dummy
  problem.add_column(0.0, {{c3, 1.0}}); // no-move
  LpResult result = lp_solve(problem);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK(result.objective == doctest::Approx(0.0));
  CHECK(result.primal[0] == doctest::Approx(0.0));
  CHECK(result.primal[1] == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded are reported") {
  LpProblem infeasible;
  const int r1 = infeasible.add_row(RowSense::GreaterEqual, 3.0);
  const int r2 = infeasible.add_row(RowSense::LessEqual, 1.0);
  infeasible.add_column(1.0, {{r1, 1.0}, {r2, 1.0}});
  CHECK(lp_solve(infeasible).status == LpStatus::Infeasible);

  LpProblem unbounded;
  const int row = unbounded.add_row(RowSense::GreaterEqual, 1.0);
  unbounded.add_column(-1.0, {{row, 1.0}});
  CHECK(lp_solve(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("negative right-hand sides are handled") {
  // min x s.t. -x >= -5, x >= 2  ->  x = 2
  LpProblem problem;
  const int r1 = problem.add_row(RowSense::GreaterEqual, -5.0);
  const int r2 = problem.add_row(RowSense::GreaterEqual, 2.0);
  problem.add_column(1.0, {{r1, -1.0}, {r2, 1.0}});
  LpResult result = lp_solve(problem);
  REQUIRE(result.status == LpStatus::Optimal);
  CHECK(result.objective == doctest::Approx(2.0));
}

namespace {

LpProblem random_problem(RngStream& rng, int rows, int cols) {
  LpProblem problem;
  auto coin = [&](double scale) {
    return scale * (static_cast<double>(rng.next_below(2001)) - 1000.0) / 1000.0;
  };
  for (int i = 0; i < rows; ++i) {
    const auto kind = rng.next_below(3);
    const RowSense sense = kind == 0   ? RowSense::GreaterEqual
                           : kind == 1 ? RowSense::LessEqual
                                       : RowSense::Equal;
    // keep feasibility likely: >= rows get small rhs, <= rows get large
    double rhs = sense == RowSense::GreaterEqual ? -std::abs(coin(1.0))
                 : sense == RowSense::LessEqual  ? 1.0 + std::abs(coin(2.0))
                                                 : coin(1.0);
    problem.add_row(sense, rhs);
  }
  for (int j = 0; j < cols; ++j) {
    std::vector<std::pair<int, double>> entries;
    for (int i = 0; i < rows; ++i)
      if (rng.next_below(100) < 60) entries.push_back({i, coin(2.0)});
    problem.add_column(1.0 + std::abs(coin(3.0)), std::move(entries));
  }
  return problem;
}

} // namespace

TEST_CASE("random LPs satisfy strong duality and dual signs") {
  RngStream rng(31);
  int optimal_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng.next_below(8));
    const int cols = 1 + static_cast<int>(rng.next_below(12));
    LpProblem problem = random_problem(rng, rows, cols);
    LpResult result = lp_solve(problem);
    if (result.status != LpStatus::Optimal) continue;
    ++optimal_count;
    CHECK(primal_residual(problem, result.primal) <= 1e-7);
    CHECK(std::abs(result.objective - result.dual_objective) <=
          1e-6 * (1.0 + std::abs(result.objective)));
    for (int i = 0; i < problem.num_rows(); ++i)
      if (problem.senses[i] != RowSense::Equal)
        CHECK(result.duals[i] >= -1e-9); // normalized signs
  }
  CHECK(optimal_count > 100);
}

TEST_CASE("warm starts reproduce the cold-start optimum deterministically") {
  RngStream rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    LpProblem problem = random_problem(rng, 5, 8);
    LpResult first = lp_solve(problem);
    if (first.status != LpStatus::Optimal) continue;

    LpResult repeat = lp_solve(problem);
    CHECK(first.basis == repeat.basis); // determinism

    // extend with a fresh column, warm start from the previous basis
    problem.add_column(0.5, {{0, 1.0}});
    LpResult warm = lp_solve(problem, &first.basis);
    LpResult cold = lp_solve(problem);
    REQUIRE(warm.status == cold.status);
    if (warm.status == LpStatus::Optimal)
      CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
  }
}

TEST_CASE("lp dump names every row and column") {
  LpProblem problem;
  problem.add_row(RowSense::LessEqual, 1.0);
  problem.add_column(2.0, {{0, 1.0}});
  const std::string dump = problem.dump();
  CHECK(dump.find("min 2*x0") != std::string::npos);
  CHECK(dump.find("r0: 1*x0 <= 1") != std::string::npos);
}
