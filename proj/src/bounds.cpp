#include "lot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lot/families.hpp"
#include "lot/random.hpp"

namespace lot {

double estimate_strong_convexity(const TransportMap& map) {
  const Points& x = map.source.points();
  const Points& t = map.values;
  if (x.rows() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two atoms");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      const Vector dx = (x.row(i) - x.row(j)).transpose();
      const double d2 = dx.squaredNorm();
      if (d2 == 0.0) throw Error(ErrorCode::InvalidArgument, "repeated atom in map source");
      best = std::min(best, (t.row(i) - t.row(j)).dot(dx.transpose()) / d2);
    }
  }
  return std::max(best, 0.0);
}

double psi_merigot(double f_sup, double eps, double C) {
  if (f_sup < 0.0 || eps < 0.0 || !(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "psi inputs must be nonnegative");
  return C * std::pow(f_sup, 1.0 / 15.0) * std::pow(eps, 2.0 / 15.0) + std::sqrt(f_sup) * eps;
}

double psi_bar(double f_sup, double eps, double R, double K_hat, double w2_sigma_mu, double id_norm_mu) {
  if (K_hat == 0.0) throw Error(ErrorCode::DegenerateConvexity, "strong convexity estimate is zero");
  if (f_sup < 0.0 || eps < 0.0 || !(R > 0.0) || K_hat < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "psi_bar inputs out of range");
  }
  const double root_f = std::sqrt(f_sup);
  const double linear = (std::sqrt(4.0 * R / K_hat) + 2.0) * root_f * eps;
  const double half = std::sqrt(4.0 * R * root_f * (w2_sigma_mu + R + id_norm_mu) / K_hat) * std::sqrt(eps);
  return linear + half;
}

double delta_threshold(double psi_mu, double psi_nu) {
  if (psi_mu < 0.0 || psi_nu < 0.0) throw Error(ErrorCode::InvalidArgument, "margins must be nonnegative");
  return 6.0 * std::max(psi_mu, psi_nu);
}

namespace {

ClassBounds class_bounds(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, double eps, double R, double C,
                         double cell_width) {
  ClassBounds b;
  b.f_sup = density_sup_estimate(mu, cell_width);
  const TransportPlan plan = solve_exact(sigma, mu);
  b.w2_sigma = std::sqrt(std::max(plan.cost, 0.0));
  b.K_hat = estimate_strong_convexity(barycentric_map(plan));
  b.id_norm = l2_norm(mu, MapSamples::identity(mu));
  b.psi = psi_merigot(b.f_sup, eps, C);
  b.psi_bar = b.K_hat > 0.0 ? psi_bar(b.f_sup, eps, R, b.K_hat, b.w2_sigma, b.id_norm)
                            : std::numeric_limits<double>::quiet_NaN();
  return b;
}

}  // namespace

BoundsReport compute_bounds(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double eps, double R, double C_merigot, double cell_width) {
  BoundsReport r;
  r.eps = eps;
  r.R = R;
  r.C_merigot = C_merigot;
  r.cell_width = cell_width;
  r.mu = class_bounds(sigma, mu, eps, R, C_merigot, cell_width);
  r.nu = class_bounds(sigma, nu, eps, R, C_merigot, cell_width);
  r.psi = std::max(r.mu.psi, r.nu.psi);
  r.psi_bar = std::max(r.mu.psi_bar, r.nu.psi_bar);
  r.delta = delta_threshold(r.mu.psi, r.nu.psi);
  r.delta_bar = std::isnan(r.psi_bar) ? r.psi_bar : delta_threshold(r.mu.psi_bar, r.nu.psi_bar);
  return r;
}

GapCurve holder_gap_curve(const DiscreteMeasure& sigma, const DiscreteMeasure& mu,
                          const std::pair<AffineMap, AffineMap>& family_base, const std::vector<double>& eps_values,
                          std::size_t trials, std::uint64_t seed, double smoothness) {
  if (!std::is_sorted(eps_values.begin(), eps_values.end())) {
    throw Error(ErrorCode::InvalidArgument, "eps values must be ascending");
  }
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  GapCurve curve;
  curve.eps_values = eps_values;
  curve.trials = trials;
  const SolverConfig exact;
  for (double eps : eps_values) {
    double sum = 0.0;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      // Same seeds at every eps: only the field amplitude changes.
      const PerturbedMap g1 = perturb(family_base.first, mu, eps, smoothness, derive_seed(seed, 2 * t));
      const PerturbedMap g2 = perturb(family_base.second, mu, eps, smoothness, derive_seed(seed, 2 * t + 1));
      const DiscreteMeasure a = g1.apply(mu);
      const DiscreteMeasure b = g2.apply(mu);
      const double gap = lot_distance(embed(sigma, a, exact), embed(sigma, b, exact)) - w2_exact(a, b);
      sum += gap;
      hi = std::max(hi, gap);
      lo = std::min(lo, gap);
    }
    curve.gap_mean.push_back(sum / static_cast<double>(trials));
    curve.gap_max.push_back(hi);
    curve.gap_min.push_back(lo);
  }
  curve.bound_values.assign(eps_values.size(), std::numeric_limits<double>::quiet_NaN());
  return curve;
}

void calibrate_merigot_constant(GapCurve& curve, std::size_t held_out) {
  if (held_out >= curve.eps_values.size() || !(curve.eps_values[held_out] > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "held-out eps must be positive");
  }
  const double e = curve.eps_values[held_out];
  curve.C_fit = std::max(curve.gap_max[held_out] / std::pow(e, 2.0 / 15.0), 1e-12);
  curve.bound_values.assign(curve.eps_values.size(), 0.0);
  for (std::size_t k = 0; k < curve.eps_values.size(); ++k) {
    const double ek = curve.eps_values[k];
    curve.bound_values[k] = curve.C_fit * std::pow(ek, 2.0 / 15.0) + 2.0 * ek;
  }
}

double fit_loglog_exponent(const std::vector<double>& eps, const std::vector<double>& values) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < eps.size() && k < values.size(); ++k) {
    if (!(eps[k] > 0.0) || !(values[k] > 0.0)) continue;
    const double x = std::log(eps[k]);
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need two positive points to fit an exponent");
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorCode::InvalidArgument, "eps values must differ");
  return (n * sxy - sx * sy) / denom;
}

SandwichSlack sandwich_check(const DiscreteMeasure& sigma, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  SandwichSlack s;
  const SolverConfig exact;
  s.w2 = w2_exact(mu, nu);
  s.lot = lot_distance(embed(sigma, mu, exact), embed(sigma, nu, exact));
  s.composition_gap = composition_gap(mu, nu, sigma);
  s.lower_slack = s.lot - s.w2;
  s.upper_slack = s.w2 + s.composition_gap - s.lot;
  return s;
}

}  // namespace lot
