#include <cmath>

#include <gtest/gtest.h>

#include "lot/families.hpp"
#include "test_support.hpp"

namespace lot {
namespace {

TEST(AffineNorm, ExpansionIdentity) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = testing::random_weighted(rng, 8, 2);
    Vector a(2);
    a << rng.uniform(-3, 3), rng.uniform(-3, 3);
    const double c = rng.uniform(0.1, 5);
    const double id2 = std::pow(affine_norm(mu, AffineMap::identity(2)), 2);
    EXPECT_NEAR(std::pow(affine_norm(mu, AffineMap::shift(a)), 2), id2 + 2 * a.dot(mu.mean()) + a.squaredNorm(), 1e-9);
    EXPECT_NEAR(affine_norm(mu, AffineMap::scaling(c, 2)), c * std::sqrt(id2), 1e-12);
  }
}

FamilySpec spec_for(const DiscreteMeasure& mu, double R, std::size_t count, std::uint64_t seed) {
  FamilySpec s;
  s.template_measure = mu;
  s.R = R;
  s.count = count;
  s.seed = seed;
  return s;
}

TEST(SampleAffine, StaysInsideTheBallAndIsDeterministic) {
  Rng rng(2);
  const auto mu = testing::random_uniform(rng, 10, 2);
  const double R = 3.0 * affine_norm(mu, AffineMap::identity(2));
  const auto spec = spec_for(mu, R, 200, 77);
  const auto maps = sample_affine(spec);
  ASSERT_EQ(maps.size(), 200u);
  int shifts = 0;
  for (const auto& h : maps) {
    EXPECT_LE(affine_norm(mu, h), R + 1e-9);
    EXPECT_TRUE(h.in_family_e());
    shifts += h.kind() == AffineMap::Kind::Shift;
  }
  EXPECT_GT(shifts, 50);
  EXPECT_LT(shifts, 150);
  const auto again = sample_affine(spec);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    EXPECT_EQ(maps[k].scale(), again[k].scale());
    EXPECT_EQ(maps[k].offset(), again[k].offset());
  }
}

TEST(SampleAffine, InfeasibleRadius) {
  Rng rng(3);
  const auto mu = testing::random_uniform(rng, 6, 2);
  const double id = affine_norm(mu, AffineMap::identity(2));
  try {
    sample_affine(spec_for(mu, 0.05 * id, 3, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleRadius);
  }
}

TEST(Perturb, HasExactNorm) {
  Rng rng(4);
  const auto mu = testing::random_uniform(rng, 12, 2);
  const auto h = AffineMap::scaling(1.5, 2);
  for (double eps : {1e-3, 0.05, 0.2, 1.0}) {
    const auto g = perturb(h, mu, eps, 0.5, 9);
    EXPECT_NEAR(l2_norm(mu, g.perturbation), eps, 1e-12);
    EXPECT_NEAR(l2_distance(mu, g.samples(), MapSamples::from_affine(mu, h)), eps, 1e-12);
  }
}

TEST(Perturb, ZeroEpsIsTheBaseMap) {
  Rng rng(5);
  const auto mu = testing::random_uniform(rng, 9, 2);
  Vector a(2);
  a << 2.0, -1.0;
  const auto h = AffineMap::shift(a);
  const auto g = perturb(h, mu, 0.0, 0.5, 3);
  EXPECT_EQ(g.eps_norm, 0.0);
  EXPECT_EQ(g.apply(mu), pushforward(mu, h));
}

TEST(Perturb, SameSeedSameField) {
  Rng rng(6);
  const auto mu = testing::random_uniform(rng, 9, 3);
  const auto h = AffineMap::identity(3);
  EXPECT_EQ(perturb(h, mu, 0.1, 0.5, 11).perturbation.values, perturb(h, mu, 0.1, 0.5, 11).perturbation.values);
  EXPECT_NE(perturb(h, mu, 0.1, 0.5, 11).perturbation.values, perturb(h, mu, 0.1, 0.5, 12).perturbation.values);
}

TEST(TwoClassDataset, SeparatedTemplates) {
  Rng rng(7);
  const auto p = testing::random_uniform(rng, 8, 2);
  Points q_pts = testing::random_points(rng, 8, 2);
  q_pts.col(0).array() += 20.0;
  const auto q = DiscreteMeasure::uniform(q_pts);
  auto sp = spec_for(p, 3.0 * affine_norm(p, AffineMap::identity(2)), 6, 1);
  auto sq = spec_for(q, 1.5 * affine_norm(q, AffineMap::identity(2)), 6, 2);
  sp.eps = sq.eps = 0.05;
  const auto data = make_two_class_dataset(sp, sq, 4);
  ASSERT_EQ(data.measures.size(), 12u);
  EXPECT_EQ(data.labels.front(), 1);
  EXPECT_EQ(data.labels.back(), -1);
  EXPECT_EQ(data.ids.front(), "P0");
  EXPECT_EQ(data.ids.back(), "Q5");
  EXPECT_EQ(data.subsample, 4u);
  EXPECT_GT(data.min_cross_w2, 0.0);
  EXPECT_FALSE(data.same_orbit_flag);
}

TEST(TwoClassDataset, SameOrbitIsFlagged) {
  Rng rng(8);
  const auto p = testing::random_uniform(rng, 6, 2);
  const auto q = pushforward(p, AffineMap::scaling(2.0, 2));
  const double R = 4.0 * affine_norm(p, AffineMap::identity(2));
  auto sp = spec_for(p, R, 3, 5);
  auto sq = spec_for(q, R, 3, 5);
  sp.shift_probability = sq.shift_probability = 0.0;
  // Shared seeds give scalings of p and q that can coincide; force one overlap.
  sq.count = 1;
  sq.template_measure = p;
  sq.seed = sp.seed;
  const auto data = make_two_class_dataset(sp, sq, 3);
  EXPECT_TRUE(data.same_orbit_flag);
  EXPECT_LT(data.min_cross_w2, 1e-9);
}

}  // namespace
}  // namespace lot
