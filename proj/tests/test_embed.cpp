#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lot/embed.hpp"
#include "lot/families.hpp"
#include "test_support.hpp"

namespace lot {
namespace {

using testing::line;

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

TEST(Embed, SelfEmbeddingIsIdentity) {
  Rng rng(1);
  const auto sigma = testing::random_weighted(rng, 9, 2);
  const auto e = embed(sigma, sigma);
  EXPECT_LT((e.values - sigma.points()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Embed, ShiftAndScaleOfReferenceAgreeWithBruteForce) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sigma = testing::random_uniform(rng, 6, 2);
    const Vector a = vec2(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const double c = rng.uniform(0.1, 10.0);
    const auto shifted = pushforward(sigma, AffineMap::shift(a));
    const auto scaled = pushforward(sigma, AffineMap::scaling(c, 2));
    const Points expect_shift = sigma.points().rowwise() + a.transpose();
    EXPECT_LT((embed(sigma, shifted).values - expect_shift).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((embed(sigma, scaled).values - c * sigma.points()).cwiseAbs().maxCoeff(), 1e-9);
    // The oracle pairs each atom with its own image as well.
    const auto oracle = brute_force_oracle(sigma, shifted);
    for (const auto& e : oracle.entries) EXPECT_EQ(e.source, e.target);
  }
}

TEST(Embed, RejectsZeroWeightReference) {
  const auto sigma = line({0.0, 1.0}, {1.0, 0.0});
  try {
    embed(sigma, line({3.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroWeightAtom);
  }
}

TEST(LotDistance, Examples) {
  Rng rng(3);
  const auto sigma = testing::random_uniform(rng, 8, 2);
  const auto mu = testing::random_uniform(rng, 8, 2);
  const auto e = embed(sigma, mu);
  EXPECT_DOUBLE_EQ(lot_distance(e, e), 0.0);
  const Vector a1 = vec2(1.0, 2.0), a2 = vec2(-2.0, 6.0);
  const auto e1 = embed(sigma, pushforward(mu, AffineMap::shift(a1)));
  const auto e2 = embed(sigma, pushforward(mu, AffineMap::shift(a2)));
  EXPECT_NEAR(lot_distance(e1, e2), (a1 - a2).norm(), 1e-9);

  const auto other = embed(testing::random_uniform(rng, 8, 2), mu);
  EXPECT_THROW(lot_distance(e, other), Error);
}

TEST(LotDistance, BoundsAndPushforwardLipschitz) {
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 1 + trial % 3;
    const Eigen::Index n = 3 + trial % 10;
    const auto sigma = testing::random_uniform(rng, n, dim);
    const auto mu = testing::random_uniform(rng, n, dim);
    const auto nu = testing::random_uniform(rng, n, dim);
    const double lot = lot_distance(embed(sigma, mu), embed(sigma, nu));
    const double w2 = w2_exact(mu, nu);
    EXPECT_GE(lot, w2 - 1e-9);
    EXPECT_LE(lot, w2_exact(mu, sigma) + w2_exact(sigma, nu) + 1e-9);

    const MapSamples g{mu, testing::random_points(rng, n, dim)};
    const MapSamples h{mu, testing::random_points(rng, n, dim)};
    EXPECT_LE(w2_exact(pushforward(mu, g), pushforward(mu, h)), l2_distance(mu, g, h) + 1e-9);
  }
}

TEST(LotDistance, ZeroDistanceMeansEqualPushforwards) {
  Rng rng(5);
  const auto sigma = testing::random_uniform(rng, 7, 2);
  const auto mu = testing::random_uniform(rng, 7, 2);
  Points permuted = mu.points().colwise().reverse();
  const auto same = DiscreteMeasure::uniform(permuted);
  const auto e1 = embed(sigma, mu);
  const auto e2 = embed(sigma, same);
  ASSERT_LT(lot_distance(e1, e2), 1e-12);
  const auto p1 = pushforward(sigma, e1.samples());
  const auto p2 = pushforward(sigma, e2.samples());
  EXPECT_EQ(p1, p2);
  EXPECT_NEAR(w2_exact(p1, mu), 0.0, 1e-12);
}

TEST(LotDistance, IsAMetricOnAFamily) {
  Rng rng(6);
  const auto sigma = testing::random_uniform(rng, 10, 2);
  std::vector<Embedding> es;
  for (int k = 0; k < 6; ++k) es.push_back(embed(sigma, testing::random_weighted(rng, 7 + k, 2)));
  for (const auto& a : es) {
    for (const auto& b : es) {
      EXPECT_NEAR(lot_distance(a, b), lot_distance(b, a), 1e-15);
      for (const auto& c : es) EXPECT_LE(lot_distance(a, c), lot_distance(a, b) + lot_distance(b, c) + 1e-10);
    }
  }
}

TEST(DistanceMatrix, Examples) {
  Rng rng(7);
  const auto sigma = testing::random_uniform(rng, 6, 1);
  const auto single = distance_matrix({embed(sigma, sigma, {}, "s")});
  EXPECT_EQ(single.entries.rows(), 1);
  EXPECT_DOUBLE_EQ(single.entries(0, 0), 0.0);

  std::vector<Embedding> shifts;
  for (double a : {0.0, 1.0, 3.0}) {
    shifts.push_back(embed(sigma, pushforward(sigma, AffineMap::shift(Vector::Constant(1, a))), {}, "S" + std::to_string(a)));
  }
  const auto m = distance_matrix(shifts);
  Eigen::Matrix3d expected;
  expected << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  EXPECT_LT((m.entries - expected).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(m.kind, DistanceKind::LOT);
}

TEST(DistanceMatrix, DominatesExactMatrix) {
  Rng rng(8);
  const auto sigma = testing::random_uniform(rng, 12, 2);
  std::vector<DiscreteMeasure> ms;
  std::vector<Embedding> es;
  std::vector<std::string> labels;
  for (int k = 0; k < 10; ++k) {
    ms.push_back(testing::random_uniform(rng, 12, 2));
    labels.push_back("m" + std::to_string(k));
    es.push_back(embed(sigma, ms.back(), {}, labels.back()));
  }
  const auto lot = distance_matrix(es);
  const auto exact = exact_distance_matrix(ms, labels);
  EXPECT_TRUE(((lot.entries - exact.entries).array() >= -1e-9).all());
  EXPECT_LT((lot.entries - lot.entries.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE((lot.entries.diagonal().array() == 0.0).all());
}

TEST(Compose, GroupLaw) {
  Rng rng(9);
  const auto sigma = testing::random_uniform(rng, 5, 2);
  const auto e = embed(sigma, testing::random_uniform(rng, 5, 2));
  EXPECT_EQ(compose(e, AffineMap::shift(Vector::Zero(2))).values, e.values);
  EXPECT_EQ(compose(e, AffineMap::scaling(1.0, 2)).values, e.values);
  const Vector a = vec2(1, 2), b = vec2(-3, 0.5);
  const auto twice = compose(compose(e, AffineMap::shift(a)), AffineMap::shift(b));
  EXPECT_LT((twice.values - compose(e, AffineMap::shift(a + b)).values).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(CompatibilityDefect, VanishesOnShiftsAndScalings) {
  Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sigma = testing::random_uniform(rng, 6, 2);
    const auto mu = testing::random_uniform(rng, 6, 2);
    const auto h = trial % 2 ? AffineMap::shift(vec2(rng.uniform(-10, 10), rng.uniform(-10, 10)))
                             : AffineMap::scaling(rng.uniform(0.1, 10), 2);
    EXPECT_LT(compatibility_defect(sigma, mu, h), 1e-9);
    // Same statement through the oracle: F(h#mu) equals h o F(mu).
    const auto oracle_map = barycentric_map(brute_force_oracle(sigma, pushforward(mu, h)));
    const auto composed = compose(embed(sigma, mu), h);
    EXPECT_LT((oracle_map.values - composed.values).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(CompatibilityDefect, MonotoneMapsOnTheLine) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sigma = testing::random_uniform(rng, 9, 1);
    const auto mu = testing::random_uniform(rng, 9, 1);
    const PointMap cube = [](const Vector& x) { return Vector(x.array().cube() + x.array()); };
    EXPECT_LT(compatibility_defect(sigma, mu, cube), 1e-9);
    const PointMap expo = [](const Vector& x) { return Vector(x.array().exp()); };
    EXPECT_LT(compatibility_defect(sigma, mu, MapSamples::from_function(mu, expo)), 1e-9);
  }
}

TEST(CompatibilityDefect, RotationIsNotCompatible) {
  Points p(5, 2);
  p << 0, 0, 3, 0, 0, 1, 4, 2, -1, 3;
  const auto mu = DiscreteMeasure::uniform(p);
  Points s(5, 2);
  s << 0, 0, 1, 0, 2, 0, 0, 1, 0, 2;
  const auto sigma = DiscreteMeasure::uniform(s);
  const PointMap rot = [](const Vector& x) { return vec2(-x(1), x(0)); };
  EXPECT_GT(compatibility_defect(sigma, mu, rot), 1e-3);
}

TEST(CompositionGap, Examples) {
  Rng rng(12);
  const auto sigma = testing::random_uniform(rng, 8, 2);
  const auto mu = testing::random_uniform(rng, 8, 2);
  EXPECT_NEAR(composition_gap(mu, mu, sigma), 0.0, 1e-12);

  for (int trial = 0; trial < 30; ++trial) {
    const auto s = testing::random_uniform(rng, 10, 1);
    const auto a = testing::random_uniform(rng, 10, 1);
    const auto b = testing::random_uniform(rng, 10, 1);
    EXPECT_LT(composition_gap(a, b, s), 1e-9);
  }

  Points p(6, 2);
  p << 0, 0, 2, 0, 4, 0, 0, 1, 1, 3, 5, 1;
  const auto base = DiscreteMeasure::uniform(p);
  const PointMap rot = [](const Vector& x) { return vec2(-x(1), x(0)); };
  const auto rotated = pushforward(base, MapSamples::from_function(base, rot));
  const auto grid = DiscreteMeasure::uniform(testing::random_points(rng, 6, 2));
  const double gap = composition_gap(base, rotated, grid);
  const double lot = lot_distance(embed(grid, base), embed(grid, rotated));
  const double w2 = w2_exact(base, rotated);
  EXPECT_GE(gap, lot - w2 - 1e-9);
}

TEST(CompositionGap, SplitPlansAreRejected) {
  try {
    composition_gap(line({0.0}), line({-1.0, 1.0}), line({0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CompositionUndefined);
  }
}

TEST(MidpointConvexity, Examples) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 2;
    const auto sigma = testing::random_uniform(rng, 6, dim);
    const auto mu = testing::random_uniform(rng, 6, dim);
    const auto s2 = AffineMap::shift(Vector::Constant(dim, 2.0));
    const auto s4 = AffineMap::shift(Vector::Constant(dim, 4.0));
    EXPECT_LT(midpoint_convexity_defect(sigma, mu, s2, s2, 0.3), 1e-12);
    EXPECT_LT(midpoint_convexity_defect(sigma, mu, s2, s4, 0.5), 1e-9);
    const auto s1 = AffineMap::shift(Vector::Constant(dim, 1.0));
    const auto r2 = AffineMap::scaling(2.0, dim);
    EXPECT_LT(midpoint_convexity_defect(sigma, mu, s1, r2, 0.5), 1e-9);
    // x -> 1.5 x + 0.5 through the oracle.
    const auto mixed = pushforward(mu, AffineMap::combine(s1, r2, 0.5));
    const auto oracle = barycentric_map(brute_force_oracle(sigma, mixed));
    EXPECT_LT((oracle.values - embed(sigma, mixed).values).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(MidpointConvexity, RejectsNonPositiveCombination) {
  EXPECT_THROW(AffineMap::general(-1.0, Vector::Zero(1)), Error);
  const auto mu = line({0.0, 1.0});
  EXPECT_THROW(midpoint_convexity_defect(mu, mu, AffineMap::scaling(1.0, 1), AffineMap::scaling(2.0, 1), 1.5), Error);
}

}  // namespace
}  // namespace lot
