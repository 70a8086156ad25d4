#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "lot/error.hpp"

namespace lot {

using Vector = Eigen::VectorXd;
// One point per row.
using Points = Eigen::MatrixXd;

class AffineMap;

// Weighted point cloud in R^d with weights summing to one.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  // Validates and renormalizes. Throws EmptySupport, NegativeWeight,
  // DimensionMismatch or InvalidArgument.
  static DiscreteMeasure make(Points points, Vector weights);
  static DiscreteMeasure uniform(Points points);

  const Points& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  Vector point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)).transpose(); }
  double weight(std::size_t i) const { return weights_(static_cast<Eigen::Index>(i)); }

  bool is_uniform(double tol = 1e-12) const;
  bool same_support(const DiscreteMeasure& other) const;
  Vector mean() const;

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.points_ == b.points_ && a.weights_ == b.weights_;
  }

 private:
  Points points_;
  Vector weights_;
};

inline DiscreteMeasure make_measure(Points points, Vector weights) {
  return DiscreteMeasure::make(std::move(points), std::move(weights));
}

// A map g sampled on the support of `source`: values.row(i) = g(x_i).
struct MapSamples {
  DiscreteMeasure source;
  Points values;

  static MapSamples identity(const DiscreteMeasure& mu);
  static MapSamples from_function(const DiscreteMeasure& mu,
                                  const std::function<Vector(const Vector&)>& g);
  static MapSamples from_affine(const DiscreteMeasure& mu, const AffineMap& h);

  // Throws SupportMismatch unless this map is sampled on exactly mu's support.
  void require_on(const DiscreteMeasure& mu) const;
};

// Images of the atoms with unchanged weights. Atoms whose images agree after
// rounding to 1e-12 are merged; merged atoms keep first-occurrence order.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const MapSamples& g);
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const AffineMap& h);

// sqrt(sum_i w_i |f(x_i)|^2)
double l2_norm(const DiscreteMeasure& mu, const MapSamples& f);
double l2_distance(const DiscreteMeasure& mu, const MapSamples& f, const MapSamples& g);

// Weighted L2 norm of row-wise differences, no support bookkeeping.
double weighted_rms(const Vector& weights, const Points& a, const Points& b);

// Histogram estimate of the sup of the density: max over occupied cells of
// cell mass / cell_width^d. Cells are aligned at the origin.
double density_sup_estimate(const DiscreteMeasure& mu, double cell_width);

}  // namespace lot
