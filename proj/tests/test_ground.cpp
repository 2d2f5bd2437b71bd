#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mixop/error.hpp"
#include "mixop/ground.hpp"
#include "test_support.hpp"

namespace mixop {
namespace {

TEST(Distance, KnownValues) {
  EXPECT_EQ(distance(Point{0.0}, Point{0.0}), 0.0);
  EXPECT_EQ(distance(Point{0.0, 0.0}, Point{3.0, 4.0}), 5.0);
}

TEST(Distance, DimensionMismatchThrows) {
  EXPECT_THROW(distance(Point{0.0}, Point{0.0, 1.0}), DimensionMismatch);
}

TEST(Point, RejectsNonFinite) {
  EXPECT_THROW(Point({std::nan("")}), InvariantViolation);
  EXPECT_THROW(Point({1.0, INFINITY}), InvariantViolation);
}

TEST(Distance, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + t % 4;
    const Point p = testing::random_point(rng, d, -5, 5);
    const Point q = testing::random_point(rng, d, -5, 5);
    const Point r = testing::random_point(rng, d, -5, 5);
    EXPECT_EQ(distance(p, q), distance(q, p));
    EXPECT_EQ(distance(p, p), 0.0);
    EXPECT_GT(distance(p, q), 0.0);
    EXPECT_LE(distance(p, r), (distance(p, q) + distance(q, r)) * (1.0 + 1e-15));
  }
}

TEST(TestSet, ContainsFollowsClosedConvention) {
  const auto box = TestSet::box({0.0}, {1.0});
  EXPECT_TRUE(box.contains(Point{0.5}));
  EXPECT_TRUE(box.contains(Point{1.0}));
  EXPECT_TRUE(box.contains(Point{0.0}));
  EXPECT_FALSE(box.contains(Point{1.0000001}));

  const auto half = TestSet::half_space({1.0}, 0.0);
  EXPECT_FALSE(half.contains(Point{0.1}));
  EXPECT_TRUE(half.contains(Point{0.0}));

  const auto ball = TestSet::ball(Point{0.0, 0.0}, 1.0);
  EXPECT_TRUE(ball.contains(Point{1.0, 0.0}));
  EXPECT_FALSE(ball.contains(Point{1.0, 0.1}));
}

TEST(TestSet, BoundaryDistanceClosedForms) {
  EXPECT_EQ(TestSet::ball(Point{0.0, 0.0}, 1.0).boundary_distance(Point{0.0, 0.0}), 1.0);
  EXPECT_EQ(TestSet::half_space({1.0}, 0.0).boundary_distance(Point{0.0}), 0.0);
  EXPECT_EQ(TestSet::box({0.0, 0.0}, {1.0, 1.0}).boundary_distance(Point{0.5, 0.5}), 0.5);
  // outside a box: distance to the nearest corner
  EXPECT_DOUBLE_EQ(TestSet::box({0.0, 0.0}, {1.0, 1.0}).boundary_distance(Point{4.0, 5.0}), 5.0);
  EXPECT_DOUBLE_EQ(TestSet::half_space({3.0, 4.0}, 5.0).boundary_distance(Point{0.0, 0.0}), 1.0);
}

TEST(TestSet, BoxBoundaryDistanceMatchesFaceMinimum) {
  // brute force: minimum over a dense sampling of the square's four faces
  std::mt19937_64 rng(3);
  const auto box = TestSet::box({0.0, 0.0}, {1.0, 1.0});
  for (int t = 0; t < 200; ++t) {
    const Point p = testing::random_point(rng, 2, -1.0, 2.0);
    double best = INFINITY;
    for (int s = 0; s <= 4000; ++s) {
      const double u = s / 4000.0;
      for (const Point& f : {Point{u, 0.0}, Point{u, 1.0}, Point{0.0, u}, Point{1.0, u}}) {
        best = std::min(best, distance(p, f));
      }
    }
    EXPECT_NEAR(box.boundary_distance(p), best, 2e-4);
  }
}

TEST(TestSet, BoundaryDistanceZeroExactlyOnBoundary) {
  const auto ball = TestSet::ball(Point{1.0}, 1.0);
  EXPECT_EQ(ball.boundary_distance(Point{0.0}), 0.0);
  EXPECT_EQ(ball.boundary_distance(Point{2.0}), 0.0);
  EXPECT_GT(ball.boundary_distance(Point{1.5}), 0.0);
  const auto box = TestSet::box({0.0, 0.0}, {1.0, 1.0});
  EXPECT_EQ(box.boundary_distance(Point{0.0, 0.3}), 0.0);
  EXPECT_EQ(box.boundary_distance(Point{1.0, 1.0}), 0.0);
}

TEST(TestSet, BallAtOriginIsPermutationInvariant) {
  std::mt19937_64 rng(11);
  const auto ball = TestSet::ball(Point{0.0, 0.0, 0.0}, 1.0);
  for (int t = 0; t < 500; ++t) {
    const Point p = testing::random_point(rng, 3, -1.0, 1.0);
    const Point q{p[2], p[0], p[1]};
    EXPECT_EQ(ball.contains(p), ball.contains(q));
  }
}

TEST(TestSet, InvariantsEnforced) {
  EXPECT_THROW(TestSet::box({1.0}, {0.0}), InvariantViolation);
  EXPECT_THROW(TestSet::box({0.0, 0.0}, {1.0}), DimensionMismatch);
  EXPECT_THROW(TestSet::ball(Point{0.0}, -1.0), InvariantViolation);
  EXPECT_THROW(TestSet::half_space({0.0, 0.0}, 1.0), InvariantViolation);
  EXPECT_THROW(TestSet::box({0.0}, {1.0}).contains(Point{0.0, 0.0}), DimensionMismatch);
  EXPECT_THROW(TestSet::ball(Point{0.0}, 1.0).boundary_distance(Point{0.0, 0.0}), DimensionMismatch);
}

}  // namespace
}  // namespace mixop
