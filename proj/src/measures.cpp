#include "lot/measures.hpp"

#include <cmath>
#include <map>
#include <vector>

#include <spdlog/spdlog.h>

#include "lot/affine.hpp"

namespace lot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::ReferenceMismatch: return "ReferenceMismatch";
    case ErrorCode::NonUniformWeights: return "NonUniformWeights";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::AtomSplitRequired: return "AtomSplitRequired";
    case ErrorCode::ZeroWeightAtom: return "ZeroWeightAtom";
    case ErrorCode::CompositionUndefined: return "CompositionUndefined";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InfeasibleRadius: return "InfeasibleRadius";
    case ErrorCode::DegenerateConvexity: return "DegenerateConvexity";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::Unfitted: return "Unfitted";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

DiscreteMeasure DiscreteMeasure::make(Points points, Vector weights) {
  if (points.rows() == 0 || weights.size() == 0) {
    throw Error(ErrorCode::EmptySupport, "measure needs at least one atom");
  }
  if (points.rows() != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "points and weights differ in length");
  }
  if (points.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "points must have positive dimension");
  }
  if (!points.allFinite() || !weights.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "non-finite coordinate or weight");
  }
  if ((weights.array() < 0.0).any()) {
    throw Error(ErrorCode::NegativeWeight, "weights must be nonnegative");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::EmptySupport, "total mass is zero");
  }
  if (std::abs(total - 1.0) > 1e-12) {
    spdlog::debug("renormalizing measure of total mass {}", total);
  }
  DiscreteMeasure m;
  m.points_ = std::move(points);
  m.weights_ = weights / total;
  return m;
}

DiscreteMeasure DiscreteMeasure::uniform(Points points) {
  const auto n = points.rows();
  return make(std::move(points), Vector::Ones(n));
}

bool DiscreteMeasure::is_uniform(double tol) const {
  const double w = 1.0 / static_cast<double>(size());
  return ((weights_.array() - w).abs() <= tol).all();
}

bool DiscreteMeasure::same_support(const DiscreteMeasure& other) const {
  return points_.rows() == other.points_.rows() && points_.cols() == other.points_.cols() &&
         points_ == other.points_;
}

Vector DiscreteMeasure::mean() const { return points_.transpose() * weights_; }

MapSamples MapSamples::identity(const DiscreteMeasure& mu) { return {mu, mu.points()}; }

MapSamples MapSamples::from_function(const DiscreteMeasure& mu,
                                     const std::function<Vector(const Vector&)>& g) {
  Points values(mu.points().rows(), mu.dim());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Vector y = g(mu.point(i));
    if (y.size() != mu.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "map changes dimension");
    }
    values.row(static_cast<Eigen::Index>(i)) = y.transpose();
  }
  return {mu, std::move(values)};
}

MapSamples MapSamples::from_affine(const DiscreteMeasure& mu, const AffineMap& h) {
  if (h.dim() != mu.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "affine map dimension differs from measure");
  }
  return {mu, h.apply_rows(mu.points())};
}

void MapSamples::require_on(const DiscreteMeasure& mu) const {
  if (!source.same_support(mu) || values.rows() != mu.points().rows() ||
      values.cols() != mu.points().cols()) {
    throw Error(ErrorCode::SupportMismatch, "map is not sampled on the measure's support");
  }
}

namespace {

std::vector<double> merge_key(const Points& pts, Eigen::Index row) {
  std::vector<double> key(static_cast<std::size_t>(pts.cols()));
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    key[static_cast<std::size_t>(k)] = std::round(pts(row, k) * 1e12);
  }
  return key;
}

}  // namespace

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const MapSamples& g) {
  g.require_on(mu);
  const Points& images = g.values;
  std::map<std::vector<double>, Eigen::Index> seen;
  std::vector<Eigen::Index> first_row;
  std::vector<double> mass;
  for (Eigen::Index i = 0; i < images.rows(); ++i) {
    auto [it, inserted] = seen.emplace(merge_key(images, i), static_cast<Eigen::Index>(first_row.size()));
    if (inserted) {
      first_row.push_back(i);
      mass.push_back(mu.weights()(i));
    } else {
      mass[static_cast<std::size_t>(it->second)] += mu.weights()(i);
    }
  }
  const auto n = static_cast<Eigen::Index>(first_row.size());
  Points pts(n, images.cols());
  Vector w(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    pts.row(k) = images.row(first_row[static_cast<std::size_t>(k)]);
    w(k) = mass[static_cast<std::size_t>(k)];
  }
  return DiscreteMeasure::make(std::move(pts), std::move(w));
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const AffineMap& h) {
  return pushforward(mu, MapSamples::from_affine(mu, h));
}

double weighted_rms(const Vector& weights, const Points& a, const Points& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != weights.size()) {
    throw Error(ErrorCode::SupportMismatch, "sample arrays differ in shape");
  }
  return std::sqrt(weights.dot((a - b).rowwise().squaredNorm()));
}

double l2_norm(const DiscreteMeasure& mu, const MapSamples& f) {
  f.require_on(mu);
  return std::sqrt(mu.weights().dot(f.values.rowwise().squaredNorm()));
}

double l2_distance(const DiscreteMeasure& mu, const MapSamples& f, const MapSamples& g) {
  f.require_on(mu);
  g.require_on(mu);
  return weighted_rms(mu.weights(), f.values, g.values);
}

double density_sup_estimate(const DiscreteMeasure& mu, double cell_width) {
  if (!(cell_width > 0.0) || !std::isfinite(cell_width)) {
    throw Error(ErrorCode::InvalidArgument, "cell_width must be positive");
  }
  std::map<std::vector<long long>, double> cells;
  for (Eigen::Index i = 0; i < mu.points().rows(); ++i) {
    std::vector<long long> cell(static_cast<std::size_t>(mu.dim()));
    for (int k = 0; k < mu.dim(); ++k) {
      cell[static_cast<std::size_t>(k)] =
          static_cast<long long>(std::floor(mu.points()(i, k) / cell_width));
    }
    cells[cell] += mu.weights()(i);
  }
  double best = 0.0;
  for (const auto& [cell, m] : cells) best = std::max(best, m);
  return best / std::pow(cell_width, mu.dim());
}

// AffineMap lives with the families module but is needed by pushforward.
AffineMap AffineMap::shift(Vector a) { return AffineMap(1.0, std::move(a)); }

AffineMap AffineMap::scaling(double c, int dim) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "scaling factor must be positive");
  return AffineMap(c, Vector::Zero(dim));
}

AffineMap AffineMap::general(double scale, Vector offset) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "linear part must be positive");
  return AffineMap(scale, std::move(offset));
}

AffineMap AffineMap::combine(const AffineMap& h1, const AffineMap& h2, double c) {
  if (h1.dim() != h2.dim()) throw Error(ErrorCode::DimensionMismatch, "affine maps differ in dimension");
  const double s = (1.0 - c) * h1.scale_ + c * h2.scale_;
  if (!(s > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "combination has non-positive linear part");
  }
  return AffineMap(s, (1.0 - c) * h1.offset_ + c * h2.offset_);
}

AffineMap::Kind AffineMap::kind() const {
  if (scale_ == 1.0) return Kind::Shift;
  if (offset_.isZero(0.0)) return Kind::Scale;
  return Kind::Affine;
}

Points AffineMap::apply_rows(const Points& xs) const {
  return (scale_ * xs).rowwise() + offset_.transpose();
}

}  // namespace lot
