#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "gridsec/error.hpp"
#include "gridsec/lp.hpp"

namespace gridsec {
namespace {

StandardFormLP make_lp(std::initializer_list<std::initializer_list<Rational>> c, RationalVector d,
                       RationalVector f) {
  return {RationalMatrix(c), std::move(d), std::move(f)};
}

TEST(Preprocess, DropsDuplicateRow) {
  const auto lp = preprocess(make_lp({{1, 1}, {2, 2}}, {1, 2}, {1, 1}));
  EXPECT_EQ(lp.constraints, RationalMatrix({{1, 1}}));
  EXPECT_EQ(lp.rhs, RationalVector{1});
}

TEST(Preprocess, ContradictoryRowsThrow) {
  try {
    preprocess(make_lp({{1}, {1}}, {1, 2}, {0}));
    FAIL() << "expected InconsistentRow";
  } catch (const InconsistentRow& e) {
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(Preprocess, RepeatedProtectedRowKeptOnce) {
  // Two copies of the same measurement row in the protected block.
  const auto lp = preprocess(make_lp({{1, -1, 0}, {1, -1, 0}, {0, 1, 1}}, {0, 0, 1}, {0, 0, 1}));
  EXPECT_EQ(lp.row_count(), 2u);
}

TEST(SolveLp, SimpleOptimum) {
  const auto lp = make_lp({{1, 1}}, {1}, {1, 1});
  const LpOutcome out = solve_lp(lp);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.solution->objective, 1);
  EXPECT_EQ(out.solution->values, (RationalVector{1, 0}));
  EXPECT_EQ(out.solution->basis, std::vector<std::size_t>{0});
  EXPECT_TRUE(verify_optimal(lp, *out.solution));
}

TEST(SolveLp, Unbounded) {
  EXPECT_EQ(solve_lp(make_lp({{1, -1}}, {0}, {-1, 0})).status, LpStatus::unbounded);
}

TEST(SolveLp, ContradictoryEqualitiesAreInfeasible) {
  EXPECT_EQ(solve_lp(make_lp({{1}, {1}}, {1, 2}, {0})).status, LpStatus::infeasible);
  EXPECT_EQ(solve_lp(make_lp({{1, 1}}, {-1}, {0, 0})).status, LpStatus::infeasible);
}

TEST(SolveLp, RedundantRowsAreDroppedAfterPhaseOne) {
  const auto lp = make_lp({{1, 1, 0}, {2, 2, 0}, {0, 1, 1}}, {1, 2, 1}, {1, 0, 1});
  const LpOutcome out = solve_lp(lp);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.stats.removed_rows, 1u);
  EXPECT_EQ(out.solution->objective, 0);
}

// Beale's example cycles under the textbook largest-coefficient rule.
StandardFormLP beale() {
  return make_lp({{1, 0, 0, Rational(1, 4), -8, -1, 9},
                  {0, 1, 0, Rational(1, 2), -12, Rational(-1, 2), 3},
                  {0, 0, 1, 0, 0, 1, 0}},
                 {0, 0, 1}, {0, 0, 0, Rational(-3, 4), 20, Rational(-1, 2), 6});
}

TEST(SolveLp, BealeTerminatesUnderBothRules) {
  for (auto rule : {PivotRule::bland, PivotRule::dantzig}) {
    SolveOptions opt;
    opt.rule = rule;
    opt.max_pivots = 100;
    const LpOutcome out = solve_lp(beale(), opt);
    ASSERT_TRUE(out.optimal());
    EXPECT_EQ(out.solution->objective, Rational(-5, 4));
    EXPECT_TRUE(verify_optimal(beale(), *out.solution));
  }
}

TEST(SolveLp, PivotCapThrows) {
  SolveOptions opt;
  opt.max_pivots = 0;
  EXPECT_THROW(solve_lp(beale(), opt), InternalError);
}

TEST(SolveLp, TraceWritesTableaus) {
  std::ostringstream trace;
  SolveOptions opt;
  opt.trace = &trace;
  solve_lp(beale(), opt);
  EXPECT_NE(trace.str().find("phase"), std::string::npos);
}

TEST(SolveLp, RandomInstancesCertifyOptimality) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> small(0, 2);
  int optimal = 0, unbounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + trial % 5, cols = rows + 1 + trial % 4;
    RationalMatrix c(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < cols; ++j) c(r, j) = entry(rng);
    // Degenerate feasible point: many zero coordinates.
    RationalVector x0(cols);
    for (auto& v : x0) v = small(rng) == 0 ? 1 : 0;
    StandardFormLP lp{c, multiply(c, x0), RationalVector(cols)};
    for (auto& v : lp.cost) v = entry(rng);

    for (auto rule : {PivotRule::bland, PivotRule::dantzig}) {
      SolveOptions opt;
      opt.rule = rule;
      opt.max_pivots = 10'000;
      const LpOutcome out = solve_lp(lp, opt);
      ASSERT_NE(out.status, LpStatus::infeasible) << "trial " << trial;
      if (out.optimal()) {
        ++optimal;
        ASSERT_TRUE(verify_optimal(lp, *out.solution)) << "trial " << trial;
        for (const auto& rc : out.reduced_costs) ASSERT_GE(rc, 0);
        EXPECT_EQ(out.solution->objective, solve_lp(lp).solution->objective);
      } else {
        ++unbounded;
      }
    }
  }
  EXPECT_GT(optimal, 0);
  EXPECT_GT(unbounded, 0);
}

TEST(SolveLp, Deterministic) {
  const LpOutcome a = solve_lp(beale());
  const LpOutcome b = solve_lp(beale());
  EXPECT_EQ(a.solution->basis, b.solution->basis);
  EXPECT_EQ(a.solution->values, b.solution->values);
}

TEST(VerifyBfs, SpecExamples) {
  const auto lp = make_lp({{1, 1}}, {1}, {1, 1});
  EXPECT_TRUE(verify_bfs(lp, {{1, 0}, {0}, 1}));
  EXPECT_FALSE(verify_bfs(lp, {{Rational(1, 2), Rational(1, 2)}, {0}, 1}));
  EXPECT_FALSE(verify_bfs(lp, {{2, -1}, {0, 1}, 1}));
  EXPECT_THROW(verify_bfs(lp, {{1, 0, 0}, {0}, 1}), DimensionMismatch);
}

TEST(VerifyOptimal, RejectsSuboptimalBasis) {
  const auto lp = make_lp({{1, 1}}, {1}, {2, 1});
  EXPECT_TRUE(verify_bfs(lp, {{1, 0}, {0}, 2}));
  EXPECT_FALSE(verify_optimal(lp, {{1, 0}, {0}, 2}));
  EXPECT_TRUE(verify_optimal(lp, {{0, 1}, {1}, 1}));
}

}  // namespace
}  // namespace gridsec
