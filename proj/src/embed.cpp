#include "lot/embed.hpp"

#include <cmath>

#include "lot/parallel.hpp"

namespace lot {

namespace {

bool same_reference(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.same_support(b) && a.weights() == b.weights();
}

TransportMap exact_deterministic_map(const DiscreteMeasure& from, const DiscreteMeasure& to) {
  TransportMap map = barycentric_map(solve_exact(from, to));
  if (map.provenance != MapProvenance::Exact) {
    throw Error(ErrorCode::CompositionUndefined, "optimal plan splits mass; no transport map");
  }
  return map;
}

}  // namespace

Vector Embedding::flattened() const {
  Vector out(values.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index d = 0; d < values.cols(); ++d) out(k++) = values(i, d);
  }
  return out;
}

Embedding embed(const DiscreteMeasure& sigma, const DiscreteMeasure& nu, const SolverConfig& config,
                std::string id) {
  if (sigma.dim() != nu.dim()) throw Error(ErrorCode::DimensionMismatch, "reference and measure differ in dimension");
  if ((sigma.weights().array() <= 0.0).any()) {
    throw Error(ErrorCode::ZeroWeightAtom, "reference has an atom without mass");
  }
  TransportMap map = barycentric_map(solve(sigma, nu, config));
  return {sigma, std::move(map.values), std::move(id), map.provenance};
}

double lot_distance(const Embedding& e1, const Embedding& e2) {
  if (!same_reference(e1.reference, e2.reference)) {
    throw Error(ErrorCode::ReferenceMismatch, "embeddings use different references");
  }
  return weighted_rms(e1.reference.weights(), e1.values, e2.values);
}

DistanceMatrix distance_matrix(const std::vector<Embedding>& embeddings) {
  const auto n = static_cast<Eigen::Index>(embeddings.size());
  DistanceMatrix out;
  out.kind = DistanceKind::LOT;
  out.entries = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : embeddings) {
    if (!same_reference(e.reference, embeddings.front().reference)) {
      throw Error(ErrorCode::ReferenceMismatch, "embeddings use different references");
    }
    out.labels.push_back(e.source_id);
  }
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) {
      out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          lot_distance(embeddings[i], embeddings[j]);
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) out.entries(j, i) = out.entries(i, j);
  }
  return out;
}

double w2_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::sqrt(std::max(0.0, solve_exact(mu, nu).cost));
}

DistanceMatrix exact_distance_matrix(const std::vector<DiscreteMeasure>& measures,
                                     std::vector<std::string> labels) {
  const auto n = static_cast<Eigen::Index>(measures.size());
  DistanceMatrix out;
  out.kind = DistanceKind::ExactW2;
  out.labels = std::move(labels);
  out.entries = Eigen::MatrixXd::Zero(n, n);
  parallel_for(measures.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < measures.size(); ++j) {
      out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w2_exact(measures[i], measures[j]);
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) out.entries(j, i) = out.entries(i, j);
  }
  return out;
}

Embedding compose(const Embedding& e, const AffineMap& h) {
  if (h.dim() != e.reference.dim()) throw Error(ErrorCode::DimensionMismatch, "affine map dimension differs");
  Embedding out = e;
  out.values = h.apply_rows(e.values);
  return out;
}

std::size_t nearest_atom(const DiscreteMeasure& mu, const Vector& x) {
  Eigen::Index best = 0;
  (mu.points().rowwise() - x.transpose()).rowwise().squaredNorm().minCoeff(&best);
  return static_cast<std::size_t>(best);
}

double compatibility_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const AffineMap& h,
                            const SolverConfig& config) {
  const Embedding moved = embed(sigma, pushforward(mu, h), config);
  const Embedding composed = compose(embed(sigma, mu, config), h);
  return lot_distance(moved, composed);
}

double compatibility_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const PointMap& h,
                            const SolverConfig& config) {
  const Embedding moved = embed(sigma, pushforward(mu, MapSamples::from_function(mu, h)), config);
  Embedding composed = embed(sigma, mu, config);
  for (Eigen::Index i = 0; i < composed.values.rows(); ++i) {
    composed.values.row(i) = h(composed.values.row(i).transpose()).transpose();
  }
  return lot_distance(moved, composed);
}

double compatibility_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const MapSamples& h,
                            const SolverConfig& config) {
  h.require_on(mu);
  const Embedding moved = embed(sigma, pushforward(mu, h), config);
  Embedding composed = embed(sigma, mu, config);
  for (Eigen::Index i = 0; i < composed.values.rows(); ++i) {
    const auto k = static_cast<Eigen::Index>(nearest_atom(mu, composed.values.row(i).transpose()));
    composed.values.row(i) = h.values.row(k);
  }
  return lot_distance(moved, composed);
}

double composition_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const DiscreteMeasure& sigma) {
  const TransportMap direct = exact_deterministic_map(mu, nu);
  const TransportMap to_reference = exact_deterministic_map(mu, sigma);
  const TransportMap from_reference = exact_deterministic_map(sigma, nu);
  Points composed(direct.values.rows(), direct.values.cols());
  for (Eigen::Index i = 0; i < composed.rows(); ++i) {
    const auto k = static_cast<Eigen::Index>(nearest_atom(sigma, to_reference.values.row(i).transpose()));
    composed.row(i) = from_reference.values.row(k);
  }
  return weighted_rms(mu.weights(), direct.values, composed);
}

double midpoint_convexity_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const AffineMap& h1,
                                 const AffineMap& h2, double c, const SolverConfig& config) {
  if (c < 0.0 || c > 1.0) throw Error(ErrorCode::InvalidArgument, "c must lie in [0, 1]");
  const AffineMap h = AffineMap::combine(h1, h2, c);
  const Embedding e1 = embed(sigma, pushforward(mu, h1), config);
  const Embedding e2 = embed(sigma, pushforward(mu, h2), config);
  Embedding mix = e1;
  mix.values = (1.0 - c) * e1.values + c * e2.values;
  return lot_distance(mix, embed(sigma, pushforward(mu, h), config));
}

}  // namespace lot
