#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mixop/error.hpp"
#include "mixop/transport.hpp"
#include "test_support.hpp"

namespace mixop {
namespace {

using testing::random_measure;

void expect_certified(const W1Result& r, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const double m = mass(mu);
  for (std::size_t i = 0; i < r.plan.rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < r.plan.cols; ++j) {
      const double f = r.plan.at(i, j);
      EXPECT_GE(f, 0.0);
      row += f;
      const double d = distance(mu.point(i), nu.point(j));
      EXPECT_LE(r.u[i] + r.v[j], d + 1e-9);
      if (f > 1e-12) EXPECT_NEAR(r.u[i] + r.v[j], d, 1e-9);
    }
    EXPECT_NEAR(row, mu.weight(i), 1e-9 * m);
  }
  for (std::size_t j = 0; j < r.plan.cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < r.plan.rows; ++i) col += r.plan.at(i, j);
    EXPECT_NEAR(col, nu.weight(j), 1e-9 * m);
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < r.plan.rows; ++i) {
    for (std::size_t j = 0; j < r.plan.cols; ++j) cost += r.plan.at(i, j) * distance(mu.point(i), nu.point(j));
  }
  EXPECT_NEAR(cost, r.cost, 1e-9 * std::max(1.0, r.cost));
  EXPECT_NEAR(r.dual_objective, r.cost, 1e-9 * std::max(1.0, r.cost));
}

TEST(W1Exact, Examples) {
  const Point x{0.3, -1.0};
  const Point y{2.0, 0.5};
  EXPECT_DOUBLE_EQ(w1_exact(DiscreteMeasure::dirac(x), DiscreteMeasure::dirac(y)).cost, distance(x, y));

  std::mt19937_64 rng(1);
  const auto mu = random_measure(rng, 30, 3);
  EXPECT_NEAR(w1_exact(mu, mu).cost, 0.0, 1e-15);

  // the 2x1 plan polytope has one vertex: all mass moves to 0.5
  const DiscreteMeasure two(1, {Point{0.0}, Point{1.0}}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(w1_exact(two, DiscreteMeasure::dirac(Point{0.5})).cost, 0.5);
}

TEST(W1Exact, Errors) {
  const auto d0 = DiscreteMeasure::dirac(Point{0.0});
  EXPECT_THROW(w1_exact(d0, DiscreteMeasure::dirac(Point{0.0}, 2.0)), MassMismatch);
  EXPECT_THROW(w1_exact(d0, DiscreteMeasure(1)), InvariantViolation);
  EXPECT_THROW(w1_exact(d0, DiscreteMeasure::dirac(Point{0.0, 0.0})), DimensionMismatch);
  // within the 1e-9 relative tolerance
  EXPECT_NO_THROW(w1_exact(d0, DiscreteMeasure::dirac(Point{1.0}, 1.0 + 1e-12)));
}

TEST(W1Exact, MatchesVertexEnumerationOnSmallInstances) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 4;
    const std::size_t m = 1 + (t / 4) % 4;
    const auto mu = random_measure(rng, n, 2, 1.0);
    const auto nu = random_measure(rng, m, 2, 1.0);
    const double oracle = testing::transport_by_vertex_enumeration(mu.weights(), nu.weights(),
                                                                   testing::cost_matrix(mu, nu));
    EXPECT_NEAR(w1_exact(mu, nu).cost, oracle, 1e-9);
  }
}

TEST(W1Exact, DualCertificateOnRandomInstances) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 30; ++t) {
    const double m = testing::uniform(rng, 0.5, 3.0);
    const auto mu = random_measure(rng, 50, 2, m);
    const auto nu = random_measure(rng, 40, 2, m);
    expect_certified(w1_exact(mu, nu), mu, nu);
  }
}

TEST(W1Exact, DegenerateUniformWeights) {
  // equal weights create many ties in the augmenting-path search
  std::vector<Point> a, b;
  for (int i = 0; i < 40; ++i) {
    a.push_back(Point{static_cast<double>(i % 7), static_cast<double>(i / 7)});
    b.push_back(Point{static_cast<double>((i + 3) % 7), static_cast<double>(i / 7) + 0.5});
  }
  const DiscreteMeasure mu(2, a, std::vector<double>(40, 0.025));
  const DiscreteMeasure nu(2, b, std::vector<double>(40, 0.025));
  expect_certified(w1_exact(mu, nu), mu, nu);
}

TEST(W1Exact, TranslationIdentity) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    const auto mu = random_measure(rng, 25, 1, 1.0, -3, 3);
    const double s = testing::uniform(rng, 0.001, 0.5);
    EXPECT_NEAR(w1_exact(translate(mu, std::vector{s}), mu).cost, s, 1e-12);
  }
}

TEST(SolveTransport, RectangularCostMatrix) {
  const std::vector<double> a{0.5, 0.5};
  const std::vector<double> b{0.2, 0.3, 0.5};
  const std::vector<double> c{1, 2, 3, 4, 0, 1};
  const auto sol = solve_transport(a, b, c);
  EXPECT_NEAR(sol.plan.cost, testing::transport_by_vertex_enumeration(a, b, c), 1e-12);
  EXPECT_NEAR(sol.dual_objective, sol.plan.cost, 1e-12);
  EXPECT_THROW(solve_transport(a, b, std::vector<double>{1, 2}), DimensionMismatch);
}

TEST(BLDistance, Examples) {
  std::mt19937_64 rng(31);
  const auto mu = random_measure(rng, 12, 2);
  EXPECT_EQ(bl_distance(mu, mu), 0.0);
  for (double d : {0.0, 0.3, 1.0, 1.999, 2.0, 3.5}) {
    const auto x = DiscreteMeasure::dirac(Point{0.0});
    const auto y = DiscreteMeasure::dirac(Point{d});
    const auto detail = bl_distance_detailed(x, y);
    EXPECT_NEAR(detail.value, std::min(d, 2.0), 1e-12);
    if (d > 0.0) EXPECT_NEAR(testing::bl_by_simplex(detail.support, detail.signed_mass), std::min(d, 2.0), 1e-12);
  }
  EXPECT_DOUBLE_EQ(bl_distance(DiscreteMeasure::dirac(Point{0.0}), DiscreteMeasure(1)), 1.0);
  EXPECT_EQ(bl_distance(DiscreteMeasure(2), DiscreteMeasure(2)), 0.0);
}

TEST(BLDistance, MatchesSimplexOracleAndWitness) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 60; ++t) {
    const auto mu = random_measure(rng, 1 + t % 5, 2, testing::uniform(rng, 0.2, 2.0), -1.5, 1.5);
    const auto nu = random_measure(rng, 1 + t % 4, 2, testing::uniform(rng, 0.2, 2.0), -1.5, 1.5);
    const auto r = bl_distance_detailed(mu, nu);
    EXPECT_NEAR(r.value, testing::bl_by_simplex(r.support, r.signed_mass), 1e-9);
    double objective = 0.0;
    for (std::size_t i = 0; i < r.support.size(); ++i) {
      EXPECT_LE(std::abs(r.witness[i]), 1.0 + 1e-12);
      for (std::size_t j = 0; j < r.support.size(); ++j) {
        EXPECT_LE(r.witness[i] - r.witness[j], distance(r.support[i], r.support[j]) + 1e-9);
      }
      objective += r.witness[i] * r.signed_mass[i];
    }
    EXPECT_NEAR(objective, r.value, 1e-9);
  }
}

TEST(BLDistance, LiteralBounds) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 100; ++t) {
    // supports in a box of diameter < 2, so the Lipschitz constraint dominates
    const auto mu = random_measure(rng, 8, 2, 1.0, 0.0, 1.0);
    const auto nu = random_measure(rng, 8, 2, 1.0, 0.0, 1.0);
    const auto r = bl_distance_detailed(mu, nu);
    double total_variation = 0.0;
    for (double g : r.signed_mass) total_variation += std::abs(g);
    EXPECT_LE(r.value, total_variation + 1e-12);
    EXPECT_LE(r.value, w1_exact(mu, nu).cost + 1e-9);
  }
}

TEST(MetricAxioms, W1AndBLOnRandomTriples) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 60; ++t) {
    const auto a = random_measure(rng, 6, 2, 1.5);
    const auto b = random_measure(rng, 7, 2, 1.5);
    const auto c = random_measure(rng, 5, 2, 1.5);
    const double ab = w1_exact(a, b).cost;
    EXPECT_NEAR(ab, w1_exact(b, a).cost, 1e-9);
    EXPECT_LE(w1_exact(a, c).cost, ab + w1_exact(b, c).cost + 1e-9);
    const double bl_ab = bl_distance(a, b);
    EXPECT_NEAR(bl_ab, bl_distance(b, a), 1e-9);
    EXPECT_LE(bl_distance(a, c), bl_ab + bl_distance(b, c) + 1e-9);
  }
}

TEST(NestedW1, Examples) {
  std::mt19937_64 rng(41);
  const auto mu = random_measure(rng, 10, 2);
  const auto mu2 = random_measure(rng, 12, 2);
  EXPECT_NEAR(nested_w1(MetaMeasure::dirac(mu), MetaMeasure::dirac(mu2)).cost, w1_exact(mu, mu2).cost, 1e-12);

  const auto nu = testing::random_probability_meta(rng, 4, 6, 2);
  EXPECT_NEAR(nested_w1(nu, nu).cost, 0.0, 1e-12);
}

TEST(NestedW1, TwoByTwoMatchesBirkhoffVertices) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 40; ++t) {
    // uniform meta-weights: the optimum sits at one of the two permutation plans
    const auto a = testing::random_measure(rng, 5, 2);
    const auto b = testing::random_measure(rng, 5, 2);
    const auto c = testing::random_measure(rng, 5, 2);
    const auto d = testing::random_measure(rng, 5, 2);
    const MetaMeasure nu(2, {a, b}, {0.5, 0.5});
    const MetaMeasure nu2(2, {c, d}, {0.5, 0.5});
    const double identity = 0.5 * (w1_exact(a, c).cost + w1_exact(b, d).cost);
    const double swap = 0.5 * (w1_exact(a, d).cost + w1_exact(b, c).cost);
    EXPECT_NEAR(nested_w1(nu, nu2).cost, std::min(identity, swap), 1e-9);
  }
}

TEST(NestedW1, IndependentOfThreadCount) {
  std::mt19937_64 rng(43);
  const auto nu = testing::random_probability_meta(rng, 6, 8, 2);
  const auto nu2 = testing::random_probability_meta(rng, 5, 8, 2);
  const auto serial = nested_w1(nu, nu2, GroundMetric::W1, 1);
  const auto parallel = nested_w1(nu, nu2, GroundMetric::W1, 4);
  EXPECT_EQ(serial.cost, parallel.cost);
  EXPECT_EQ(serial.plan.flow, parallel.plan.flow);
  EXPECT_EQ(serial.plan.unit_cost, parallel.plan.unit_cost);
}

TEST(NestedW1, ErrorsNameTheAtomPair) {
  const auto d0 = DiscreteMeasure::dirac(Point{0.0});
  const MetaMeasure nu(1, {d0}, {1.0});
  const MetaMeasure heavy(1, {DiscreteMeasure::dirac(Point{1.0}, 2.0)}, {1.0});
  try {
    nested_w1(nu, heavy);
    FAIL();
  } catch (const MassMismatch& e) {
    EXPECT_NE(std::string(e.what()).find("(0, 0)"), std::string::npos);
  }
  EXPECT_NO_THROW(nested_w1(nu, heavy, GroundMetric::BoundedLipschitz));
  EXPECT_THROW(nested_w1(nu, MetaMeasure(1, {d0}, {2.0})), MassMismatch);
}

TEST(PlanCsv, HasHeaderAndPositiveEntries) {
  const DiscreteMeasure two(1, {Point{0.0}, Point{1.0}}, {0.5, 0.5});
  const auto r = w1_exact(two, DiscreteMeasure::dirac(Point{0.5}));
  std::ostringstream out;
  write_plan_csv(out, r.plan);
  EXPECT_EQ(out.str(), "i,j,flow,cost_ij\n0,0,0.5,0.5\n1,0,0.5,0.5\n");
}

}  // namespace
}  // namespace mixop
