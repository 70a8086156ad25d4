#include "lot/families.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lot/random.hpp"

namespace lot {

double affine_norm(const DiscreteMeasure& mu, const AffineMap& h) {
  return l2_norm(mu, MapSamples::from_affine(mu, h));
}

std::vector<AffineMap> sample_affine(const FamilySpec& spec) {
  const DiscreteMeasure& mu = spec.template_measure;
  if (!(spec.R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  if (spec.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be at least 1");
  if (!(spec.scale_min > 0.0) || spec.scale_max < spec.scale_min) {
    throw Error(ErrorCode::InvalidArgument, "invalid scaling range");
  }
  const int d = mu.dim();
  const Vector m = mu.mean();
  const double id_norm = l2_norm(mu, MapSamples::identity(mu));

  // |x + a|_mu^2 = |a + m|^2 + |Id|^2 - |m|^2, so feasible shifts form a ball.
  const double ball_sq = spec.R * spec.R - id_norm * id_norm + m.squaredNorm();
  const bool shifts_ok = ball_sq >= 0.0;
  const double ball = shifts_ok ? std::sqrt(ball_sq) : 0.0;
  const double c_hi = id_norm > 0.0 ? std::min(spec.scale_max, spec.R / id_norm) : spec.scale_max;
  if (c_hi < spec.scale_min) {
    throw Error(ErrorCode::InfeasibleRadius, "no scaling in range satisfies |R_c|_mu <= R");
  }

  Rng rng(spec.seed);
  std::vector<AffineMap> out;
  out.reserve(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k) {
    const bool pick_shift = shifts_ok && rng.uniform() < spec.shift_probability;
    if (pick_shift) {
      Vector dir(d);
      for (int i = 0; i < d; ++i) dir(i) = rng.normal();
      const double n = dir.norm();
      if (n > 0.0) dir /= n;
      const double radius = ball * std::pow(rng.uniform(), 1.0 / d);
      // Shrink slightly so rounding never pushes the norm past R.
      out.push_back(AffineMap::shift(radius * (1.0 - 1e-12) * dir - m));
    } else {
      out.push_back(AffineMap::scaling(rng.uniform(spec.scale_min, c_hi), d));
    }
  }
  return out;
}

MapSamples PerturbedMap::samples() const {
  MapSamples base_samples = MapSamples::from_affine(perturbation.source, base);
  base_samples.values += perturbation.values;
  return base_samples;
}

DiscreteMeasure PerturbedMap::apply(const DiscreteMeasure& mu) const {
  perturbation.require_on(mu);
  return pushforward(mu, samples());
}

PerturbedMap perturb(const AffineMap& h, const DiscreteMeasure& mu, double eps, double smoothness,
                     std::uint64_t seed, int bumps) {
  if (eps < 0.0) throw Error(ErrorCode::InvalidArgument, "eps must be nonnegative");
  if (!(smoothness > 0.0) || bumps < 1) throw Error(ErrorCode::InvalidArgument, "invalid smoothness");
  const int d = mu.dim();
  Points field = Points::Zero(static_cast<Eigen::Index>(mu.size()), d);
  if (eps > 0.0) {
    const Vector m = mu.mean();
    const double spread =
        std::sqrt(mu.weights().dot((mu.points().rowwise() - m.transpose()).rowwise().squaredNorm()));
    const double width = smoothness * (spread > 0.0 ? spread : 1.0);
    Rng rng(seed);
    for (int b = 0; b < bumps; ++b) {
      const Vector center = mu.point(rng.index(mu.size()));
      Vector amp(d);
      for (int i = 0; i < d; ++i) amp(i) = rng.normal();
      for (Eigen::Index i = 0; i < field.rows(); ++i) {
        const double r2 = (mu.points().row(i).transpose() - center).squaredNorm();
        field.row(i) += std::exp(-r2 / (2.0 * width * width)) * amp.transpose();
      }
    }
    const double norm = std::sqrt(mu.weights().dot(field.rowwise().squaredNorm()));
    if (!(norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "degenerate displacement field");
    field *= eps / norm;
  }
  return {h, MapSamples{mu, std::move(field)}, eps};
}

LabeledMeasures make_two_class_dataset(const FamilySpec& p, const FamilySpec& q, std::size_t subsample) {
  if (p.template_measure.dim() != q.template_measure.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "class templates differ in dimension");
  }
  LabeledMeasures out;
  auto add_class = [&](const FamilySpec& spec, int label, const char* prefix) {
    const auto maps = sample_affine(spec);
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const PerturbedMap g = perturb(maps[k], spec.template_measure, spec.eps, spec.smoothness,
                                     derive_seed(spec.seed, k), spec.bumps);
      out.measures.push_back(g.apply(spec.template_measure));
      out.labels.push_back(label);
      out.ids.push_back(std::string(prefix) + std::to_string(k));
    }
  };
  add_class(p, 1, "P");
  add_class(q, -1, "Q");

  out.subsample = std::min({subsample, p.count, q.count});
  out.min_cross_w2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.subsample; ++i) {
    for (std::size_t j = 0; j < out.subsample; ++j) {
      out.min_cross_w2 = std::min(out.min_cross_w2, w2_exact(out.measures[i], out.measures[p.count + j]));
    }
  }
  out.same_orbit_flag = out.min_cross_w2 < 1e-9;
  return out;
}

}  // namespace lot
