#pragma once

#include <cstdint>
#include <vector>

#include "lot/affine.hpp"
#include "lot/embed.hpp"

namespace lot {

// |h|_mu for an affine map, i.e. sqrt(sum_i w_i |h(x_i)|^2).
double affine_norm(const DiscreteMeasure& mu, const AffineMap& h);

struct FamilySpec {
  DiscreteMeasure template_measure;
  double R = 1.0;
  double eps = 0.0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  double shift_probability = 0.5;
  double scale_min = 0.1;
  double scale_max = 10.0;
  // Bump width of the displacement field relative to the template's rms
  // radius about its mean.
  double smoothness = 0.5;
  int bumps = 4;
};

// An element of the eps-tube: base affine map plus a displacement field
// sampled on the template support with |field|_mu == eps_norm.
struct PerturbedMap {
  AffineMap base;
  MapSamples perturbation;
  double eps_norm = 0.0;

  MapSamples samples() const;
  DiscreteMeasure apply(const DiscreteMeasure& mu) const;
};

// Draws spec.count maps h in E with |h|_mu <= R. Shifts are uniform over the
// feasible ball, scalings uniform over the feasible range. Throws
// InfeasibleRadius when no scaling in [scale_min, scale_max] fits.
std::vector<AffineMap> sample_affine(const FamilySpec& spec);

PerturbedMap perturb(const AffineMap& h, const DiscreteMeasure& mu, double eps, double smoothness,
                     std::uint64_t seed, int bumps = 4);

struct LabeledMeasures {
  std::vector<DiscreteMeasure> measures;
  std::vector<int> labels;  // +1 for P, -1 for Q
  std::vector<std::string> ids;
  // Minimum exact W2 across classes on the first `subsample` members of each.
  double min_cross_w2 = 0.0;
  std::size_t subsample = 0;
  bool same_orbit_flag = false;  // min_cross_w2 below 1e-9
};

LabeledMeasures make_two_class_dataset(const FamilySpec& p, const FamilySpec& q, std::size_t subsample = 10);

}  // namespace lot
