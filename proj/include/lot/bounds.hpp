#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lot/embed.hpp"

namespace lot {

// Discrete strong-convexity estimate of the potential whose gradient is the
// map: min over atom pairs of <T(x_i) - T(x_j), x_i - x_j> / |x_i - x_j|^2,
// clipped at zero. The continuum constant is an infimum over all pairs, so
// this is an upper estimate. Throws InvalidArgument for fewer than two atoms
// or repeated atoms.
double estimate_strong_convexity(const TransportMap& map);

// C f^(1/15) eps^(2/15) + f^(1/2) eps
double psi_merigot(double f_sup, double eps, double C);

// (sqrt(4R/K) + 2) f^(1/2) eps + (4R f^(1/2) (w2 + R + |Id|) / K)^(1/2) eps^(1/2).
// Throws DegenerateConvexity when K == 0.
double psi_bar(double f_sup, double eps, double R, double K_hat, double w2_sigma_mu, double id_norm_mu);

// 6 * max(psi_mu, psi_nu)
double delta_threshold(double psi_mu, double psi_nu);

struct ClassBounds {
  double f_sup = 0.0;
  double K_hat = 0.0;
  double w2_sigma = 0.0;
  double id_norm = 0.0;
  double psi = 0.0;
  double psi_bar = 0.0;  // NaN when K_hat == 0
};

struct BoundsReport {
  double eps = 0.0;
  double R = 0.0;
  double C_merigot = 1.0;
  double cell_width = 1.0;
  ClassBounds mu;
  ClassBounds nu;
  double psi = 0.0;       // max over the two classes
  double psi_bar = 0.0;
  double delta = 0.0;     // 6 * max psi
  double delta_bar = 0.0; // 6 * max psi_bar
};

// Estimates every input of the two margins from the templates mu and nu.
// The transport maps from sigma come from the exact solver.
BoundsReport compute_bounds(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double eps, double R, double C_merigot, double cell_width);

struct GapCurve {
  std::vector<double> eps_values;
  std::vector<double> gap_mean;
  std::vector<double> gap_max;
  std::vector<double> gap_min;
  std::vector<double> bound_values;  // C eps^(2/15) + 2 eps with C_fit
  double C_fit = 0.0;
  std::size_t trials = 0;
};

// For each eps, perturbs both base maps `trials` times (fields drawn once per
// trial and rescaled to each eps), and records |F(g1#mu) - F(g2#mu)| - W2.
// The reference must make every plan a permutation for the gaps to be
// nonnegative, e.g. uniform weights with the same size as mu.
GapCurve holder_gap_curve(const DiscreteMeasure& sigma, const DiscreteMeasure& mu,
                          const std::pair<AffineMap, AffineMap>& family_base, const std::vector<double>& eps_values,
                          std::size_t trials, std::uint64_t seed, double smoothness = 0.5);

// Sets C_fit so that C eps^(2/15) alone covers the max gap at `held_out`,
// then fills bound_values with C eps^(2/15) + 2 eps.
void calibrate_merigot_constant(GapCurve& curve, std::size_t held_out);

// Least-squares slope of log(values) against log(eps) over entries with
// eps > 0 and value > 0.
double fit_loglog_exponent(const std::vector<double>& eps, const std::vector<double>& values);

struct SandwichSlack {
  double w2 = 0.0;
  double lot = 0.0;
  double composition_gap = 0.0;
  double lower_slack = 0.0;  // lot - w2
  double upper_slack = 0.0;  // w2 + composition_gap - lot
};

SandwichSlack sandwich_check(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace lot
