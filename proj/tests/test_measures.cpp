#include <cmath>

#include <gtest/gtest.h>

#include "lot/affine.hpp"
#include "lot/measures.hpp"
#include "test_support.hpp"

namespace lot {
namespace {

using testing::line;

TEST(MakeMeasure, RenormalizesWeights) {
  const auto mu = line({0.0, 1.0}, {2.0, 2.0});
  EXPECT_DOUBLE_EQ(mu.weight(0), 0.5);
  EXPECT_DOUBLE_EQ(mu.weight(1), 0.5);
}

TEST(MakeMeasure, Singleton) {
  Points p(1, 2);
  p << 0.0, 0.0;
  const auto mu = make_measure(p, Vector::Ones(1));
  EXPECT_EQ(mu.size(), 1u);
  EXPECT_EQ(mu.dim(), 2);
  EXPECT_DOUBLE_EQ(mu.weight(0), 1.0);
}

TEST(MakeMeasure, RejectsBadInput) {
  Points p(2, 1);
  p << 0.0, 1.0;
  Vector w(2);
  w << 1.0, -1.0;
  try {
    make_measure(p, w);
    FAIL() << "expected NegativeWeight";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeWeight);
  }
  EXPECT_THROW(make_measure(Points(0, 1), Vector(0)), Error);
  EXPECT_THROW(make_measure(p, Vector::Ones(3)), Error);
}

TEST(Pushforward, ShiftMovesPoints) {
  const auto mu = line({0.0, 1.0});
  const auto moved = pushforward(mu, AffineMap::shift(Vector::Constant(1, 2.0)));
  EXPECT_EQ(moved, line({2.0, 3.0}));
}

TEST(Pushforward, MergesCollapsedAtoms) {
  const auto mu = line({-1.0, 1.0});
  const auto sq = MapSamples::from_function(mu, [](const Vector& x) { return Vector(x.array().square()); });
  const auto moved = pushforward(mu, sq);
  ASSERT_EQ(moved.size(), 1u);
  EXPECT_DOUBLE_EQ(moved.points()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(moved.weight(0), 1.0);
}

TEST(Pushforward, ScalingKeepsWeights) {
  const auto mu = line({0.0, 1.0}, {0.3, 0.7});
  const auto moved = pushforward(mu, AffineMap::scaling(2.0, 1));
  EXPECT_DOUBLE_EQ(moved.points()(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(moved.weight(0), 0.3);
  EXPECT_DOUBLE_EQ(moved.weight(1), 0.7);
}

TEST(Pushforward, RejectsForeignSupport) {
  const auto mu = line({0.0, 1.0});
  const auto other = line({0.0, 2.0});
  EXPECT_THROW(pushforward(mu, MapSamples::identity(other)), Error);
}

TEST(L2Norm, Examples) {
  const auto mu = line({0.0, 1.0});
  EXPECT_DOUBLE_EQ(l2_norm(mu, MapSamples{mu, Points::Zero(2, 1)}), 0.0);
  EXPECT_NEAR(l2_norm(mu, MapSamples::identity(mu)), std::sqrt(0.5), 1e-15);

  Points p(2, 2);
  p << 0, 0, 3, 4;
  const auto nu = DiscreteMeasure::uniform(p);
  EXPECT_NEAR(l2_norm(nu, MapSamples::identity(nu)), std::sqrt(12.5), 1e-15);
}

TEST(L2Distance, Examples) {
  const auto mu = line({1.0, 2.0});
  const auto id = MapSamples::identity(mu);
  EXPECT_DOUBLE_EQ(l2_distance(mu, id, id), 0.0);
  const auto s1 = MapSamples::from_affine(mu, AffineMap::shift(Vector::Constant(1, 1.0)));
  const auto s3 = MapSamples::from_affine(mu, AffineMap::shift(Vector::Constant(1, 3.0)));
  EXPECT_NEAR(l2_distance(mu, s1, s3), 2.0, 1e-15);
  const auto r2 = MapSamples::from_affine(mu, AffineMap::scaling(2.0, 1));
  EXPECT_NEAR(l2_distance(mu, id, r2), std::sqrt(2.5), 1e-15);
}

TEST(DensitySup, Examples) {
  Points grid(10, 1);
  for (int i = 0; i < 10; ++i) grid(i, 0) = i;
  EXPECT_NEAR(density_sup_estimate(DiscreteMeasure::uniform(grid), 1.0), 0.1, 1e-15);

  Points point(1, 2);
  point << 0.3, 0.7;
  EXPECT_DOUBLE_EQ(density_sup_estimate(DiscreteMeasure::uniform(point), 1.0), 1.0);

  // 100 atoms on [0, 1], cells of width 0.1 hold 10 or 11 atoms.
  Points fine(100, 1);
  for (int i = 0; i < 100; ++i) fine(i, 0) = i / 99.0;
  const double est = density_sup_estimate(DiscreteMeasure::uniform(fine), 0.1);
  EXPECT_GE(est, 1.0 - 1e-12);
  EXPECT_LE(est, 1.1 + 1e-12);

  EXPECT_THROW(density_sup_estimate(DiscreteMeasure::uniform(fine), 0.0), Error);
}

TEST(MeasureProperties, PushforwardPreservesMassAndComposes) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + trial % 3;
    auto mu = testing::random_weighted(rng, 12, dim);
    // Rounded images collide often, exercising the merge path.
    auto g = [](const Vector& x) { return Vector(x.array().round()); };
    auto h = [](const Vector& x) { return Vector(2.0 * x.array() + 1.0); };
    const auto once = pushforward(mu, MapSamples::from_function(mu, g));
    EXPECT_NEAR(once.weights().sum(), 1.0, 1e-12);
    const auto twice = pushforward(once, MapSamples::from_function(once, h));
    const auto direct = pushforward(mu, MapSamples::from_function(mu, [&](const Vector& x) { return h(g(x)); }));
    ASSERT_EQ(twice.size(), direct.size());
    EXPECT_TRUE(twice.points().isApprox(direct.points(), 0.0));
    EXPECT_LT((twice.weights() - direct.weights()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MeasureProperties, TriangleInequality) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto mu = testing::random_weighted(rng, 8, 2);
    const MapSamples f{mu, testing::random_points(rng, 8, 2)};
    const MapSamples g{mu, testing::random_points(rng, 8, 2)};
    const MapSamples h{mu, testing::random_points(rng, 8, 2)};
    EXPECT_LE(l2_distance(mu, f, h), l2_distance(mu, f, g) + l2_distance(mu, g, h) + 1e-10);
    EXPECT_NEAR(l2_distance(mu, f, g), l2_distance(mu, g, f), 1e-15);
  }
}

}  // namespace
}  // namespace lot
