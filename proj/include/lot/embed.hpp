#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lot/affine.hpp"
#include "lot/ot.hpp"

namespace lot {

// F_sigma(nu): the transport map from the reference, sampled on its support.
struct Embedding {
  DiscreteMeasure reference;
  Points values;
  std::string source_id;
  MapProvenance provenance = MapProvenance::Exact;

  // Row-major flattening, length dim * N.
  Vector flattened() const;
  MapSamples samples() const { return {reference, values}; }
};

enum class DistanceKind { LOT, ExactW2 };

struct DistanceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;
  DistanceKind kind = DistanceKind::LOT;
};

// Throws ZeroWeightAtom if sigma has an atom without mass.
Embedding embed(const DiscreteMeasure& sigma, const DiscreteMeasure& nu,
                const SolverConfig& config = {}, std::string id = {});

// L2(sigma) distance between two embeddings; throws ReferenceMismatch.
double lot_distance(const Embedding& e1, const Embedding& e2);

DistanceMatrix distance_matrix(const std::vector<Embedding>& embeddings);
// Pairwise exact W2, N(N-1)/2 solves.
DistanceMatrix exact_distance_matrix(const std::vector<DiscreteMeasure>& measures,
                                     std::vector<std::string> labels);

double w2_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

Embedding compose(const Embedding& e, const AffineMap& h);

using PointMap = std::function<Vector(const Vector&)>;

// |F_sigma(h#mu) - h o F_sigma(mu)| in L2(sigma).
double compatibility_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const AffineMap& h,
                            const SolverConfig& config = {});
double compatibility_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const PointMap& h,
                            const SolverConfig& config = {});
// h known only on mu's support; off-support arguments use the nearest atom.
double compatibility_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const MapSamples& h,
                            const SolverConfig& config = {});

// |T_mu^nu - T_sigma^nu o T_mu^sigma| in L2(mu), with exact deterministic
// maps. T_sigma^nu is evaluated off its support at the nearest atom of
// sigma. Throws CompositionUndefined when a plan splits mass.
double composition_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const DiscreteMeasure& sigma);

// |(1-c) F(h1#mu) + c F(h2#mu) - F(h#mu)| with h = (1-c) h1 + c h2.
double midpoint_convexity_defect(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const AffineMap& h1,
                                 const AffineMap& h2, double c, const SolverConfig& config = {});

// Index of the atom of mu closest to x (first on ties).
std::size_t nearest_atom(const DiscreteMeasure& mu, const Vector& x);

}  // namespace lot
