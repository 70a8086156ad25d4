#pragma once

#include <cstdint>

#include "lot/measures.hpp"
#include "lot/random.hpp"

namespace lot::testing {

inline Points random_points(Rng& rng, Eigen::Index n, int dim, double spread = 1.0) {
  Points p(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) p(i, k) = spread * rng.normal();
  }
  return p;
}

inline DiscreteMeasure random_uniform(Rng& rng, Eigen::Index n, int dim, double spread = 1.0) {
  return DiscreteMeasure::uniform(random_points(rng, n, dim, spread));
}

inline DiscreteMeasure random_weighted(Rng& rng, Eigen::Index n, int dim) {
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = 0.1 + rng.uniform();
  return DiscreteMeasure::make(random_points(rng, n, dim), w);
}

inline DiscreteMeasure line(std::initializer_list<double> xs) {
  Points p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return DiscreteMeasure::uniform(std::move(p));
}

inline DiscreteMeasure line(std::initializer_list<double> xs, std::initializer_list<double> ws) {
  Points p(static_cast<Eigen::Index>(xs.size()), 1);
  Vector w(static_cast<Eigen::Index>(ws.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  i = 0;
  for (double v : ws) w(i++) = v;
  return DiscreteMeasure::make(std::move(p), std::move(w));
}

}  // namespace lot::testing
