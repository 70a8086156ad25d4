#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lot/error.hpp"

namespace lot {

struct FeatureMatrix {
  Eigen::MatrixXd rows;  // one sample per row
  std::vector<int> labels;  // +1 / -1

  Eigen::Index feature_dim() const { return rows.cols(); }
  Eigen::Index size() const { return rows.rows(); }
  // Throws InvalidArgument on inconsistent shapes or labels outside {-1, +1}.
  void validate() const;
  FeatureMatrix subset(const std::vector<std::size_t>& indices) const;
};

struct LinearModel {
  enum class Kind { LDA, HardMargin };
  Kind kind = Kind::LDA;
  Eigen::VectorXd weights;
  double bias = 0.0;
  // LDA only: unit direction orthogonal to weights carrying the most
  // within-class variance, used for 2D scatter plots.
  Eigen::VectorXd second_axis;

  bool fitted() const { return weights.size() > 0; }
  double score(const Eigen::VectorXd& x) const { return weights.dot(x) - bias; }
  int predict(const Eigen::VectorXd& x) const { return score(x) > 0.0 ? 1 : -1; }
};

// Two-class Fisher LDA with pooled covariance shrunk toward
// (trace / p) * I. Throws SingularCovariance when the regularized covariance
// is not positive definite.
LinearModel lda_fit(const FeatureMatrix& X, double shrinkage = 1e-3);

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // k x feature_dim, orthonormal rows
  Eigen::VectorXd explained_variance;

  FeatureMatrix project(const FeatureMatrix& X) const;
};

// Throws InvalidArgument when k exceeds min(rows, feature_dim).
PcaModel pca_fit(const FeatureMatrix& X, Eigen::Index k);
FeatureMatrix pca_project(const FeatureMatrix& X, Eigen::Index k);

struct SeparationResult {
  bool separable = false;
  LinearModel model;      // HardMargin, unit-norm weights
  double margin = 0.0;    // geometric margin of the returned hyperplane
  double hull_distance = 0.0;  // distance between the class convex hulls
};

// Decides separability exactly with a phase-one simplex on the convex-hull
// intersection system, then finds the maximum-margin hyperplane as the
// nearest pair of hull points.
SeparationResult hard_margin_separate(const FeatureMatrix& X);

// Fraction of misclassified rows. Throws DimensionMismatch / Unfitted.
double error_rate(const LinearModel& model, const FeatureMatrix& X);

struct EvalReport {
  double train_error = 0.0;
  double test_error = 0.0;
  std::optional<double> margin;
  std::vector<double> per_trial;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
};

EvalReport evaluate(const LinearModel& model, const FeatureMatrix& X_test);
// Fills mean and stddev of report.per_trial.
void aggregate(EvalReport& report);

// (w.x, second_axis.x) for every row; throws Unfitted without an LDA axis.
std::vector<std::array<double, 2>> lda_scatter_coordinates(const LinearModel& model, const FeatureMatrix& X);

}  // namespace lot
