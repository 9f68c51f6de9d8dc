#include <prosparse/bounds.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace prosparse;

namespace {

// Direct re-evaluation of the threshold predicates, guard band included, used
// to cross-check the closed-form maxima the report carries.
Index brute_max_total(Index n, double mu, const char* which) {
  Index best = 0;
  for (Index total = 1; total <= 2 * n; ++total) {
    bool ok = false;
    for (Index kp = 0; kp <= total; ++kp) {
      const BoundFlags f = classify_pair(n, mu, kp, total - kp);
      if (std::string(which) == "p0" && f.p0_unique) ok = true;
      if (std::string(which) == "bp_simple" && f.bp_simple) ok = true;
      if (std::string(which) == "total" && f.total) ok = true;
    }
    if (ok) best = total;
  }
  return best;
}

}  // namespace

TEST(Bounds, FrozenThresholdsAtTheReferencePoint) {
  const BoundReport report = evaluate_bounds(144, 1.0 / 12.0);
  EXPECT_EQ(report.max_total_p0, 11);
  EXPECT_EQ(report.max_total_bp_simple, 10);
  EXPECT_EQ(report.max_total_overall, 16);
}

TEST(Bounds, MaximaAgreeWithDirectEnumeration) {
  struct Case {
    Index n;
    double mu;
  };
  for (const Case& c : {Case{144, 1.0 / 12.0}, Case{64, 1.0 / 8.0}, Case{100, 0.1}}) {
    const BoundReport report = evaluate_bounds(c.n, c.mu);
    EXPECT_EQ(report.max_total_p0, brute_max_total(c.n, c.mu, "p0")) << "n=" << c.n;
    EXPECT_EQ(report.max_total_bp_simple, brute_max_total(c.n, c.mu, "bp_simple")) << "n=" << c.n;
    EXPECT_EQ(report.max_total_overall, brute_max_total(c.n, c.mu, "total")) << "n=" << c.n;
  }
}

TEST(Bounds, RegionInclusionsHoldOnTheFullGrid) {
  const BoundReport report = evaluate_bounds(144, 1.0 / 12.0);
  ASSERT_FALSE(report.grid.empty());
  for (const BoundCell& cell : report.grid) {
    if (cell.flags.bp_tight) {
      EXPECT_TRUE(cell.flags.p0_unique) << "kp=" << cell.kp << " kq=" << cell.kq;
    }
    if (cell.flags.bp_simple) {
      EXPECT_TRUE(cell.flags.bp_tight) << "kp=" << cell.kp << " kq=" << cell.kq;
    }
  }
}

TEST(Bounds, ExactTiesLandOnTheBoundary) {
  // mu = 1/4 makes 1/mu integral, so kp + kq = 4 is an exact tie.
  const BoundFlags tie = classify_pair(32, 0.25, 2, 2);
  EXPECT_FALSE(tie.p0_unique);
  EXPECT_TRUE(tie.p0_boundary);
  const BoundFlags inside = classify_pair(32, 0.25, 2, 1);
  EXPECT_TRUE(inside.p0_unique);
  EXPECT_FALSE(inside.p0_boundary);

  // The admission product is integer arithmetic: 2 * 4 * 4 = 32 exactly.
  const BoundFlags product_tie = classify_pair(32, 0.25, 4, 4);
  EXPECT_FALSE(product_tie.product);
  EXPECT_TRUE(product_tie.product_boundary);
  const BoundFlags product_in = classify_pair(32, 0.25, 3, 4);
  EXPECT_TRUE(product_in.product);
  EXPECT_FALSE(product_in.product_boundary);
}

TEST(Bounds, CurvesMatchTheGridFrontier) {
  const Index n = 64;
  const double mu = 1.0 / 8.0;
  const std::vector<BoundCurveRow> curves = bound_curves(n, mu, 8);
  ASSERT_EQ(curves.size(), 8u);  // one row per kp = 1..8
  EXPECT_EQ(curves.front().kp, 1);
  for (const BoundCurveRow& row : curves) {
    // Reported frontier kq is admitted, kq + 1 is not.
    if (row.p0 >= 0) {
      EXPECT_TRUE(classify_pair(n, mu, row.kp, row.p0).p0_unique);
    }
    EXPECT_FALSE(classify_pair(n, mu, row.kp, row.p0 + 1).p0_unique);
    if (row.product >= 0) {
      EXPECT_TRUE(classify_pair(n, mu, row.kp, row.product).product);
    }
    EXPECT_FALSE(classify_pair(n, mu, row.kp, row.product + 1).product);
  }
}

TEST(Bounds, GridShapeAndLimits) {
  const BoundReport report = evaluate_bounds(64, 1.0 / 8.0, 5);
  EXPECT_EQ(report.grid_limit, 5);
  EXPECT_EQ(report.grid.size(), 36u);  // (limit+1)^2, kq fastest
  EXPECT_EQ(report.grid[0].kp, 0);
  EXPECT_EQ(report.grid[0].kq, 0);
  EXPECT_EQ(report.grid[1].kq, 1);
  EXPECT_EQ(report.grid[6].kp, 1);
}

TEST(Bounds, RejectsNonsenseInputs) {
  EXPECT_THROW(evaluate_bounds(0, 0.1), SolverError);
  EXPECT_THROW(evaluate_bounds(64, 0.0), SolverError);
  EXPECT_THROW(evaluate_bounds(64, -0.5), SolverError);
  EXPECT_THROW(evaluate_bounds(64, 1.5), SolverError);
}
