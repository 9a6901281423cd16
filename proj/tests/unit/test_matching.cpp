#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles/assignment_oracle.hpp"
#include "oslk/error.hpp"
#include "oslk/matching.hpp"
#include "support/random_boxes.hpp"

using namespace oslk;

namespace {

CostMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                         bool integer) {
  std::uniform_real_distribution<double> real(0.0, 10.0);
  std::uniform_int_distribution<int> small(0, 4);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = integer ? small(rng) : real(rng);
  return CostMatrix(rows, cols, std::move(v));
}

std::vector<double> entries_of(const CostMatrix& m) {
  std::vector<double> v;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double x : m.row(r)) v.push_back(x);
  }
  return v;
}

}  // namespace

TEST(CostMatrix, RejectsBadInput) {
  EXPECT_THROW(CostMatrix(0, 1, std::vector<double>{}), InvalidInput);
  EXPECT_THROW(CostMatrix(1, 1, std::vector<double>{NAN}), InvalidInput);
  EXPECT_THROW(CostMatrix(1, 1, std::vector<double>{-1.0}), InvalidInput);
  EXPECT_THROW(CostMatrix(1, 2, std::vector<double>{1.0}), InvalidInput);
  CostMatrix m(2, 2);
  EXPECT_THROW(m.set(0, 0, INFINITY), InvalidInput);
}

TEST(SolveAssignment, Examples) {
  const auto r = solve_assignment(CostMatrix(2, 2, {1, 2, 2, 1}));
  EXPECT_EQ(r.assignment, (std::vector<std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(r.total_cost, 2.0);

  const auto single = solve_assignment(CostMatrix(1, 1, {5}));
  EXPECT_EQ(single.assignment, (std::vector<std::size_t>{0}));
  EXPECT_DOUBLE_EQ(single.total_cost, 5.0);
}

TEST(SolveAssignment, InfeasibleWhenMoreRowsThanColumns) {
  EXPECT_THROW(solve_assignment(CostMatrix(3, 2, 1.0)), Infeasible);
}

TEST(SolveAssignment, RectangularPicksCheapColumns) {
  const auto r = solve_assignment(CostMatrix(2, 4, {9, 9, 1, 9, 9, 9, 9, 2}));
  EXPECT_EQ(r.assignment, (std::vector<std::size_t>{2, 3}));
  EXPECT_DOUBLE_EQ(r.total_cost, 3.0);
}

TEST(SolveAssignment, TiesResolveLexicographically) {
  const auto zeros = solve_assignment(CostMatrix(3, 5, 0.0));
  EXPECT_EQ(zeros.assignment, (std::vector<std::size_t>{0, 1, 2}));
  const auto swap = solve_assignment(CostMatrix(2, 2, {1, 1, 1, 1}));
  EXPECT_EQ(swap.assignment, (std::vector<std::size_t>{0, 1}));
  const auto forced = solve_assignment(CostMatrix(2, 3, {0, 0, 5, 0, 5, 5}));
  EXPECT_EQ(forced.assignment, (std::vector<std::size_t>{1, 0}));
}

TEST(SolveAssignment, MatchesBruteForceIncludingTies) {
  std::mt19937_64 rng(99);
  for (std::size_t rows = 1; rows <= 5; ++rows) {
    for (std::size_t cols = rows; cols <= 6; ++cols) {
      for (int trial = 0; trial < 40; ++trial) {
        const CostMatrix m = random_matrix(rng, rows, cols, trial % 2 == 0);
        const auto got = solve_assignment(m);
        const auto want = oracle::brute_force_assignment(entries_of(m), rows, cols);
        EXPECT_EQ(got.assignment, want.assignment);
        EXPECT_EQ(got.total_cost, want.total);
      }
    }
  }
}

TEST(SolveAssignment, ResultInvariants) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const CostMatrix m = random_matrix(rng, 6, 8, false);
    const auto r = solve_assignment(m);
    std::set<std::size_t> cols(r.assignment.begin(), r.assignment.end());
    EXPECT_EQ(cols.size(), r.assignment.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < r.assignment.size(); ++j) {
      EXPECT_EQ(r.per_pair_cost[j], m(j, r.assignment[j]));
      sum += r.per_pair_cost[j];
    }
    EXPECT_NEAR(sum, r.total_cost, 1e-9);
  }
}

TEST(SolveAssignment, RowConstantDoesNotChangeAssignment) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> add(0.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 5, cols = 6;
    CostMatrix m = random_matrix(rng, rows, cols, false);
    const auto base = solve_assignment(m);
    const std::size_t row = static_cast<std::size_t>(trial) % rows;
    const double c = add(rng);
    for (std::size_t col = 0; col < cols; ++col) m.set(row, col, m(row, col) + c);
    EXPECT_EQ(solve_assignment(m).assignment, base.assignment);
  }
}

TEST(GeoCost, Examples) {
  const Box3D a = Box3D::make(0, 0, 0, 1, 2, 3, 0.1);
  EXPECT_EQ(geo_cost(a, a), 0.0);
  const Box3D shifted = Box3D::make(1.5, 0, 0, 1, 2, 3, 0.1);
  EXPECT_DOUBLE_EQ(geo_cost(a, shifted), 1.5);

  const Box3D p = Box3D::make(0, 0, 0, 1, 1, 1, 3.1);
  const Box3D q = Box3D::make(0, 0, 0, 1, 1, 1, -3.1);
  EXPECT_NEAR(geo_cost(p, q), 2 * kPi - 6.2, 1e-12);
  EXPECT_NEAR(geo_cost(p, q, {.raw_yaw_l1 = true}), 6.2, 1e-12);
}

TEST(GeoCost, Symmetric) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 500; ++k) {
    const Box3D a = testing_support::random_box(rng);
    const Box3D b = testing_support::random_box(rng);
    EXPECT_DOUBLE_EQ(geo_cost(a, b), geo_cost(b, a));
    EXPECT_EQ(geo_cost(a, a), 0.0);
  }
}

TEST(HungarianCost, Examples) {
  Box3D gt = Box3D::make(0, 0, 0, 1, 1, 1, 0, 1);
  const std::vector<double> sure{0.0, 1.0};
  EXPECT_EQ(hungarian_cost(gt, gt, sure, {7.0, 3.0}), 0.0);

  const std::vector<double> half{0.5, 0.5};
  EXPECT_DOUBLE_EQ(hungarian_cost(gt, gt, half, {1.0, 1.0}), 0.5);

  const Box3D off = Box3D::make(2, 0, 0, 1, 1, 1, 0);
  EXPECT_DOUBLE_EQ(hungarian_cost(gt, off, sure), 0.5);  // 2 * 0 + 0.25 * 2
}

TEST(HungarianCost, Errors) {
  const Box3D gt = Box3D::make(0, 0, 0, 1, 1, 1, 0, 3);
  const std::vector<double> probs{0.5, 0.5};
  EXPECT_THROW(hungarian_cost(gt, gt, probs), InvalidInput);
  const Box3D ok = Box3D::make(0, 0, 0, 1, 1, 1, 0, 0);
  const std::vector<double> bad{0.5, 0.6};
  EXPECT_THROW(hungarian_cost(ok, ok, bad), InvalidInput);
  const Box3D unlabeled = Box3D::make(0, 0, 0, 1, 1, 1, 0);
  EXPECT_THROW(hungarian_cost(unlabeled, unlabeled, probs), InvalidInput);
}

TEST(GeoHungarian, IdentityAndDecoy) {
  std::vector<Box3D> boxes{Box3D::make(0, 0, 0, 1, 2, 1, 0), Box3D::make(5, 5, 0, 2, 4, 1, 1)};
  const auto same = geo_hungarian_match(boxes, boxes);
  EXPECT_EQ(same.assignment, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(same.total_cost, 0.0);

  std::vector<Box3D> preds{Box3D::make(5.2, 5, 0, 2, 4, 1, 1), Box3D::make(0.1, 0, 0, 1, 2, 1, 0),
                           Box3D::make(50, 50, 0, 1, 2, 1, 0)};
  const auto r = geo_hungarian_match(boxes, preds);
  EXPECT_EQ(r.assignment, (std::vector<std::size_t>{1, 0}));
  EXPECT_TRUE(std::find(r.assignment.begin(), r.assignment.end(), 2u) == r.assignment.end());
}

TEST(GeoHungarian, EmptyGroundTruth) {
  std::vector<Box3D> preds{Box3D::make(0, 0, 0, 1, 1, 1, 0)};
  const auto r = geo_hungarian_match({}, preds);
  EXPECT_TRUE(r.assignment.empty());
  EXPECT_EQ(r.total_cost, 0.0);
}

TEST(GeoHungarian, IgnoresClassLabels) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> cls(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Box3D> gt, preds;
    for (int i = 0; i < 4; ++i) gt.push_back(testing_support::random_box(rng));
    for (int i = 0; i < 6; ++i) preds.push_back(testing_support::random_box(rng));
    const auto base = geo_hungarian_match(gt, preds);
    for (auto& b : gt) b.class_id = cls(rng);
    for (auto& b : preds) b.class_id = cls(rng);
    EXPECT_EQ(geo_hungarian_match(gt, preds).assignment, base.assignment);
  }
}

TEST(HungarianMatch, ClassTermCanOverrideGeometry) {
  std::vector<Box3D> gt{Box3D::make(0, 0, 0, 1, 1, 1, 0, 0)};
  std::vector<Box3D> preds{Box3D::make(0, 0, 0, 1, 1, 1, 0), Box3D::make(1, 0, 0, 1, 1, 1, 0)};
  std::vector<std::vector<double>> probs{{0.0, 1.0}, {1.0, 0.0}};
  EXPECT_EQ(hungarian_match(gt, preds, probs).assignment, (std::vector<std::size_t>{1}));
  EXPECT_EQ(geo_hungarian_match(gt, preds).assignment, (std::vector<std::size_t>{0}));
}
