#include "lot/classify.hpp"

#include <cmath>
#include <numeric>

namespace lot {

void FeatureMatrix::validate() const {
  if (static_cast<std::size_t>(rows.rows()) != labels.size()) {
    throw Error(ErrorCode::InvalidArgument, "row and label counts differ");
  }
  for (int y : labels) {
    if (y != 1 && y != -1) throw Error(ErrorCode::InvalidArgument, "labels must be +1 or -1");
  }
}

FeatureMatrix FeatureMatrix::subset(const std::vector<std::size_t>& indices) const {
  FeatureMatrix out;
  out.rows.resize(static_cast<Eigen::Index>(indices.size()), rows.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.rows.row(static_cast<Eigen::Index>(k)) = rows.row(static_cast<Eigen::Index>(indices[k]));
    out.labels.push_back(labels[indices[k]]);
  }
  return out;
}

LinearModel lda_fit(const FeatureMatrix& X, double shrinkage) {
  X.validate();
  if (shrinkage < 0.0 || shrinkage > 1.0) throw Error(ErrorCode::InvalidArgument, "shrinkage must lie in [0, 1]");
  const Eigen::Index p = X.feature_dim();
  Eigen::VectorXd mean_pos = Eigen::VectorXd::Zero(p), mean_neg = Eigen::VectorXd::Zero(p);
  double n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    if (X.labels[static_cast<std::size_t>(i)] > 0) {
      mean_pos += X.rows.row(i).transpose();
      ++n_pos;
    } else {
      mean_neg += X.rows.row(i).transpose();
      ++n_neg;
    }
  }
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::InvalidArgument, "both classes must be present");
  mean_pos /= n_pos;
  mean_neg /= n_neg;

  Eigen::MatrixXd centered(X.size(), p);
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    centered.row(i) = X.rows.row(i) - (X.labels[static_cast<std::size_t>(i)] > 0 ? mean_pos : mean_neg).transpose();
  }
  const double dof = std::max(1.0, n_pos + n_neg - 2.0);
  Eigen::MatrixXd cov = centered.transpose() * centered / dof;
  const double avg_eig = cov.trace() / static_cast<double>(p);
  cov = (1.0 - shrinkage) * cov;
  cov.diagonal().array() += shrinkage * avg_eig;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const double top = eig.eigenvalues().maxCoeff();
  if (!(top > 0.0) || eig.eigenvalues().minCoeff() <= 1e-12 * top) {
    throw Error(ErrorCode::SingularCovariance, "pooled covariance is singular; raise shrinkage");
  }
  const Eigen::VectorXd diff = mean_pos - mean_neg;
  LinearModel model;
  model.kind = LinearModel::Kind::LDA;
  model.weights = eig.eigenvectors() * (eig.eigenvectors().transpose() * diff).cwiseQuotient(eig.eigenvalues());
  model.bias = 0.5 * model.weights.dot(mean_pos + mean_neg) - std::log(n_pos / n_neg);

  const double wn = model.weights.norm();
  if (wn > 0.0 && p > 1) {
    const Eigen::VectorXd u = model.weights / wn;
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(p, p) - u * u.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> within(proj * cov * proj);
    model.second_axis = within.eigenvectors().col(p - 1);
    Eigen::Index k;
    model.second_axis.cwiseAbs().maxCoeff(&k);
    if (model.second_axis(k) < 0) model.second_axis = -model.second_axis;
  } else {
    model.second_axis = Eigen::VectorXd::Zero(p);
  }
  return model;
}

PcaModel pca_fit(const FeatureMatrix& X, Eigen::Index k) {
  if (k < 1 || k > std::min(X.size(), X.feature_dim())) {
    throw Error(ErrorCode::InvalidArgument, "k exceeds min(rows, feature_dim)");
  }
  PcaModel model;
  model.mean = X.rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = X.rows.rowwise() - model.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::Index avail = svd.matrixV().cols();
  model.components = Eigen::MatrixXd::Zero(k, X.feature_dim());
  model.explained_variance = Eigen::VectorXd::Zero(k);
  const double denom = std::max<double>(1.0, static_cast<double>(X.size() - 1));
  for (Eigen::Index c = 0; c < std::min(k, avail); ++c) {
    Eigen::VectorXd v = svd.matrixV().col(c);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    model.components.row(c) = v.transpose();
    model.explained_variance(c) = svd.singularValues()(c) * svd.singularValues()(c) / denom;
  }
  return model;
}

FeatureMatrix PcaModel::project(const FeatureMatrix& X) const {
  if (X.feature_dim() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "feature dimension differs from PCA fit");
  FeatureMatrix out;
  out.rows = (X.rows.rowwise() - mean.transpose()) * components.transpose();
  out.labels = X.labels;
  return out;
}

FeatureMatrix pca_project(const FeatureMatrix& X, Eigen::Index k) { return pca_fit(X, k).project(X); }

double error_rate(const LinearModel& model, const FeatureMatrix& X) {
  if (!model.fitted()) throw Error(ErrorCode::Unfitted, "model has no weights");
  if (X.feature_dim() != model.weights.size()) throw Error(ErrorCode::DimensionMismatch, "feature dimension differs");
  X.validate();
  if (X.size() == 0) return 0.0;
  std::size_t wrong = 0;
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    if (model.predict(X.rows.row(i).transpose()) != X.labels[static_cast<std::size_t>(i)]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(X.size());
}

EvalReport evaluate(const LinearModel& model, const FeatureMatrix& X_test) {
  EvalReport r;
  r.test_error = error_rate(model, X_test);
  r.per_trial = {r.test_error};
  aggregate(r);
  return r;
}

void aggregate(EvalReport& report) {
  const auto& v = report.per_trial;
  if (v.empty()) {
    report.mean = report.stddev = 0.0;
    return;
  }
  report.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - report.mean) * (x - report.mean);
  report.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

std::vector<std::array<double, 2>> lda_scatter_coordinates(const LinearModel& model, const FeatureMatrix& X) {
  if (!model.fitted() || model.kind != LinearModel::Kind::LDA || model.second_axis.size() != model.weights.size()) {
    throw Error(ErrorCode::Unfitted, "scatter coordinates need a fitted LDA model");
  }
  if (X.feature_dim() != model.weights.size()) throw Error(ErrorCode::DimensionMismatch, "feature dimension differs");
  std::vector<std::array<double, 2>> out;
  out.reserve(static_cast<std::size_t>(X.size()));
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    out.push_back({model.weights.dot(X.rows.row(i).transpose()), model.second_axis.dot(X.rows.row(i).transpose())});
  }
  return out;
}

}  // namespace lot
