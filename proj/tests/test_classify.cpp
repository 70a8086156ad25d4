#include <cmath>

#include <gtest/gtest.h>

#include "lot/classify.hpp"
#include "lot/random.hpp"

namespace lot {
namespace {

FeatureMatrix gaussian_classes(Rng& rng, int per_class, int dim, double separation) {
  FeatureMatrix X;
  X.rows.resize(2 * per_class, dim);
  for (int i = 0; i < 2 * per_class; ++i) {
    const bool pos = i < per_class;
    for (int d = 0; d < dim; ++d) X.rows(i, d) = rng.normal() + (pos && d == 0 ? separation : 0.0);
    X.labels.push_back(pos ? 1 : -1);
  }
  return X;
}

TEST(Lda, SeparatedClustersAndNoSignal) {
  Rng rng(1);
  const auto train = gaussian_classes(rng, 50, 1, 10.0);
  const auto test = gaussian_classes(rng, 200, 1, 10.0);
  const auto model = lda_fit(train);
  EXPECT_LT(error_rate(model, test), 0.01);

  const auto flat = gaussian_classes(rng, 2000, 3, 0.0);
  const auto flat_test = gaussian_classes(rng, 2000, 3, 0.0);
  EXPECT_NEAR(error_rate(lda_fit(flat), flat_test), 0.5, 0.05);
}

TEST(Lda, FullShrinkageIsNearestCentroid) {
  Rng rng(2);
  auto X = gaussian_classes(rng, 30, 4, 3.0);
  X.rows.col(2) *= 5.0;
  const auto model = lda_fit(X, 1.0);
  Eigen::VectorXd mp = Eigen::VectorXd::Zero(4), mn = Eigen::VectorXd::Zero(4);
  for (Eigen::Index i = 0; i < X.size(); ++i) (X.labels[i] > 0 ? mp : mn) += X.rows.row(i).transpose();
  const Eigen::VectorXd diff = (mp - mn) / 30.0;
  EXPECT_NEAR(std::abs(model.weights.normalized().dot(diff.normalized())), 1.0, 1e-12);
}

TEST(Lda, SingularCovarianceWithoutShrinkage) {
  FeatureMatrix X;
  X.rows.resize(4, 2);
  X.rows << 0, 0, 1, 0, 0, 5, 1, 5;
  X.labels = {1, 1, -1, -1};
  try {
    lda_fit(X, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularCovariance);
  }
}

TEST(Lda, AffineReparametrizationKeepsDecisions) {
  Rng rng(3);
  const auto train = gaussian_classes(rng, 40, 3, 1.0);
  const auto test = gaussian_classes(rng, 100, 3, 1.0);
  Eigen::Matrix3d A;
  A << 2, 1, 0, 0, 1, -1, 1, 0, 3;
  const Eigen::RowVector3d t(5, -2, 7);
  FeatureMatrix train2 = train, test2 = test;
  train2.rows = (train.rows * A.transpose()).rowwise() + t;
  test2.rows = (test.rows * A.transpose()).rowwise() + t;
  const auto m1 = lda_fit(train, 0.0);
  const auto m2 = lda_fit(train2, 0.0);
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    EXPECT_EQ(m1.predict(test.rows.row(i).transpose()), m2.predict(test2.rows.row(i).transpose()));
  }
}

TEST(Pca, FullRankIsARotation) {
  Rng rng(4);
  const auto X = gaussian_classes(rng, 20, 5, 2.0);
  const auto P = pca_project(X, 5);
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    for (Eigen::Index j = 0; j < X.size(); ++j) {
      EXPECT_NEAR((X.rows.row(i) - X.rows.row(j)).norm(), (P.rows.row(i) - P.rows.row(j)).norm(), 1e-9);
    }
  }
  const auto model = pca_fit(X, 5);
  for (Eigen::Index k = 1; k < model.explained_variance.size(); ++k) {
    EXPECT_LE(model.explained_variance(k), model.explained_variance(k - 1));
  }
  EXPECT_THROW(pca_fit(X, 6), Error);
}

TEST(Pca, RankOneIsLossless) {
  FeatureMatrix X;
  X.rows.resize(6, 3);
  const Eigen::RowVector3d dir(1, 2, -2);
  for (int i = 0; i < 6; ++i) X.rows.row(i) = (i - 2.5) * dir + Eigen::RowVector3d(1, 1, 1);
  X.labels = {1, 1, 1, -1, -1, -1};
  const auto model = pca_fit(X, 1);
  const auto P = model.project(X);
  const Eigen::MatrixXd back = (P.rows * model.components).rowwise() + model.mean.transpose();
  EXPECT_LT((back - X.rows).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HardMargin, Examples) {
  FeatureMatrix X;
  X.rows.resize(2, 1);
  X.rows << 0, 1;
  X.labels = {-1, 1};
  const auto r = hard_margin_separate(X);
  ASSERT_TRUE(r.separable);
  EXPECT_NEAR(r.margin, 0.5, 1e-12);
  EXPECT_EQ(error_rate(r.model, X), 0.0);

  FeatureMatrix Y;
  Y.rows.resize(4, 2);
  Y.rows << 0, 0, 1, 1, 0, 0, 1, 1;
  Y.labels = {1, 1, -1, -1};
  EXPECT_FALSE(hard_margin_separate(Y).separable);

  FeatureMatrix Z;
  Z.rows.resize(4, 2);
  Z.rows << 0, 0, 2, 2, 2, 0, 0, 2;  // XOR corners
  Z.labels = {1, 1, -1, -1};
  EXPECT_FALSE(hard_margin_separate(Z).separable);
}

TEST(HardMargin, TranslationAndScaling) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = gaussian_classes(rng, 15, 3, 8.0);
    const auto r = hard_margin_separate(X);
    ASSERT_TRUE(r.separable);
    EXPECT_GT(r.margin, 0.0);
    EXPECT_EQ(error_rate(r.model, X), 0.0);
    FeatureMatrix moved = X;
    moved.rows = (2.5 * X.rows).rowwise() + Eigen::RowVector3d(-4, 9, 1);
    const auto r2 = hard_margin_separate(moved);
    ASSERT_TRUE(r2.separable);
    EXPECT_NEAR(r2.margin, 2.5 * r.margin, 1e-7 * std::max(1.0, r.margin));
  }
}

TEST(Evaluate, Examples) {
  Rng rng(6);
  const auto X = gaussian_classes(rng, 10, 2, 20.0);
  const auto r = hard_margin_separate(X);
  EXPECT_EQ(evaluate(r.model, X).test_error, 0.0);

  LinearModel constant;
  constant.weights = Eigen::VectorXd::Zero(2);
  constant.bias = -1.0;  // always +1
  FeatureMatrix T = X.subset({0, 1, 2, 10, 11, 12, 13, 14, 15, 16});
  EXPECT_DOUBLE_EQ(error_rate(constant, T), 0.7);

  LinearModel unfitted;
  EXPECT_THROW(error_rate(unfitted, X), Error);
  LinearModel wrong;
  wrong.weights = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(error_rate(wrong, X), Error);
}

TEST(Evaluate, AggregateMatchesRecomputation) {
  EvalReport rep;
  Rng rng(7);
  for (int k = 0; k < 20; ++k) rep.per_trial.push_back(rng.uniform());
  aggregate(rep);
  double mean = 0;
  for (double v : rep.per_trial) mean += v;
  mean /= 20;
  double ss = 0;
  for (double v : rep.per_trial) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(rep.mean, mean, 1e-15);
  EXPECT_NEAR(rep.stddev, std::sqrt(ss / 19), 1e-15);
}

TEST(Scatter, FirstAxisReproducesDecision) {
  Rng rng(8);
  const auto X = gaussian_classes(rng, 30, 4, 6.0);
  const auto model = lda_fit(X);
  const auto pts = lda_scatter_coordinates(model, X);
  ASSERT_EQ(pts.size(), 60u);
  EXPECT_NEAR(model.second_axis.norm(), 1.0, 1e-12);
  EXPECT_NEAR(model.second_axis.dot(model.weights), 0.0, 1e-9 * model.weights.norm());
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    EXPECT_EQ(pts[i][0] - model.bias > 0 ? 1 : -1, model.predict(X.rows.row(i).transpose()));
  }
  EXPECT_THROW(lda_scatter_coordinates(LinearModel{}, X), Error);
}

}  // namespace
}  // namespace lot
