#include "lot/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include <spdlog/spdlog.h>

#include "lot/classify.hpp"
#include "lot/datasets.hpp"
#include "lot/random.hpp"

namespace lot {

namespace {

Points normal_points(Rng& rng, Eigen::Index n, int dim) {
  Points p(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) p(i, k) = rng.normal();
  }
  return p;
}

DiscreteMeasure normal_uniform(Rng& rng, Eigen::Index n, int dim) {
  return DiscreteMeasure::uniform(normal_points(rng, n, dim));
}

Vector normal_vector(Rng& rng, int dim, double spread) {
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = spread * rng.normal();
  return v;
}

// Largest violation of f_i + g_j <= c_ij.
double dual_infeasibility(const TransportPlan& plan) {
  const Eigen::MatrixXd c = squared_distances(plan.source.points(), plan.target.points());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      worst = std::max(worst, plan.duals->source(i) + plan.duals->target(j) - c(i, j));
    }
  }
  return worst;
}

AffineMap random_shift_or_scale(Rng& rng, int dim) {
  if (rng.uniform() < 0.5) return AffineMap::shift(normal_vector(rng, dim, 2.0));
  return AffineMap::scaling(std::exp(rng.uniform(std::log(0.1), std::log(10.0))), dim);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Json suite_to_json(const SuiteResult& r) { return Json{{"name", r.name}, {"passed", r.passed}, {"metrics", r.metrics}}; }

SuiteResult oracle_suite(std::size_t instances, std::uint64_t seed, double tol) {
  Rng rng(seed);
  double max_error = 0.0, max_duality_gap = 0.0, max_infeasibility = 0.0;
  for (std::size_t k = 0; k < instances; ++k) {
    const int dim = 1 + static_cast<int>(k % 3);
    const auto n = static_cast<Eigen::Index>(1 + rng.index(6));
    const auto a = normal_uniform(rng, n, dim);
    const auto b = normal_uniform(rng, n, dim);
    const TransportPlan exact = solve_exact(a, b);
    const TransportPlan brute = brute_force_oracle(a, b);
    max_error = std::max(max_error, std::abs(exact.cost - brute.cost));
    max_duality_gap = std::max(max_duality_gap, std::abs(exact.dual_objective() - exact.cost));
    max_infeasibility = std::max(max_infeasibility, dual_infeasibility(exact));
  }
  SuiteResult r{"oracle", max_error < tol && max_duality_gap < tol && max_infeasibility < tol, {}};
  r.metrics = {{"instances", instances},
               {"max_abs_error", max_error},
               {"max_duality_gap", max_duality_gap},
               {"max_dual_infeasibility", max_infeasibility},
               {"tol", tol}};
  return r;
}

SuiteResult isometry_1d_suite(std::size_t triples, std::uint64_t seed, double tol) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < triples; ++k) {
    const auto n = static_cast<Eigen::Index>(2 + rng.index(39));
    const auto sigma = normal_uniform(rng, n, 1);
    const auto mu = normal_uniform(rng, n, 1);
    const auto nu = DiscreteMeasure::uniform(normal_points(rng, n, 1) * 3.0);
    const double lot = lot_distance(embed(sigma, mu), embed(sigma, nu));
    worst = std::max(worst, std::abs(lot - w2_exact(mu, nu)));
  }
  SuiteResult r{"isometry_1d", worst < tol, {}};
  r.metrics = {{"triples", triples}, {"max_abs_deviation", worst}, {"tol", tol}};
  return r;
}

SuiteResult shift_scale_suite(std::size_t cases, std::uint64_t seed, double tol, double compat_tol) {
  Rng rng(seed);
  double worst = 0.0, worst_compat = 0.0;
  for (std::size_t k = 0; k < cases; ++k) {
    const int dim = 2 + static_cast<int>(k % 2);
    const auto n = static_cast<Eigen::Index>(3 + rng.index(18));
    const auto sigma = normal_uniform(rng, n, dim);
    const auto mu = normal_uniform(rng, n, dim);
    const AffineMap h1 = random_shift_or_scale(rng, dim);
    const AffineMap h2 = random_shift_or_scale(rng, dim);
    const double lot = lot_distance(embed(sigma, pushforward(mu, h1)), embed(sigma, pushforward(mu, h2)));
    const double expected = l2_distance(mu, MapSamples::from_affine(mu, h1), MapSamples::from_affine(mu, h2));
    worst = std::max(worst, std::abs(lot - expected));
    worst_compat = std::max({worst_compat, compatibility_defect(sigma, mu, h1), compatibility_defect(sigma, mu, h2)});
  }
  SuiteResult r{"shift_scale_isometry", worst < tol && worst_compat < compat_tol, {}};
  r.metrics = {{"cases", cases},
               {"max_abs_deviation", worst},
               {"max_compatibility_defect", worst_compat},
               {"tol", tol},
               {"compat_tol", compat_tol}};
  return r;
}

SuiteResult sandwich_suite(std::size_t pairs, std::uint64_t seed, double upper_rel_tol) {
  Rng rng(seed);
  double min_lower = std::numeric_limits<double>::infinity();
  double min_upper_rel = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto n = static_cast<Eigen::Index>(4 + rng.index(17));
    const auto sigma = normal_uniform(rng, n, 2);
    const auto mu = normal_uniform(rng, n, 2);
    const auto nu = DiscreteMeasure::uniform(normal_points(rng, n, 2) * rng.uniform(0.5, 2.0));
    const SandwichSlack s = sandwich_check(sigma, mu, nu);
    min_lower = std::min(min_lower, s.lower_slack);
    if (s.w2 > 0.0) min_upper_rel = std::min(min_upper_rel, s.upper_slack / s.w2);
    ok = ok && s.lower_slack >= -1e-9 && s.upper_slack >= -upper_rel_tol * s.w2;
  }
  SuiteResult r{"sandwich", ok, {}};
  r.metrics = {{"pairs", pairs},
               {"min_lower_slack", min_lower},
               {"min_upper_slack_over_w2", min_upper_rel},
               {"upper_rel_tol", upper_rel_tol}};
  return r;
}

SuiteResult cyclic_monotonicity_suite(std::size_t instances, std::uint64_t seed, bool inject_crossed) {
  Rng rng(seed);
  std::size_t total = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < instances; ++k) {
    const int dim = 1 + static_cast<int>(k % 3);
    const auto plan = solve_exact(normal_uniform(rng, static_cast<Eigen::Index>(2 + rng.index(15)), dim),
                                  DiscreteMeasure::make(normal_points(rng, 10, dim), Vector::Ones(10)));
    const auto report = cyclic_monotonicity_violations(plan);
    total += report.violations;
    worst = std::max(worst, report.worst);
  }
  if (inject_crossed) {
    Points x(2, 1);
    x << 0.0, 1.0;
    TransportPlan crossed;
    crossed.source = DiscreteMeasure::uniform(x);
    crossed.target = crossed.source;
    crossed.entries = {{0, 1, 0.5}, {1, 0, 0.5}};
    crossed.cost = crossed.recomputed_cost();
    const auto report = cyclic_monotonicity_violations(crossed);
    total += report.violations;
    worst = std::max(worst, report.worst);
  }
  SuiteResult r{"cyclic_monotonicity", total == 0, {}};
  r.metrics = {{"instances", instances}, {"injected_crossed_plan", inject_crossed}, {"violations", total},
               {"worst_excess", worst}};
  return r;
}

SuiteResult gap_curve_suite(const GapSuiteSpec& spec, GapCurve* curve_out) {
  Rng rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.atoms);
  const auto mu = normal_uniform(rng, n, 2);
  const auto sigma = normal_uniform(rng, n, 2);
  Vector a(2);
  a << 1.0, -0.5;
  GapCurve curve = holder_gap_curve(sigma, mu, {AffineMap::shift(a), AffineMap::scaling(1.5, 2)}, spec.eps_values,
                                    spec.trials, derive_seed(spec.seed, 1), spec.smoothness);

  double zero_gap = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  bool increasing = true;
  for (std::size_t k = 0; k < curve.eps_values.size(); ++k) {
    if (curve.eps_values[k] == 0.0) zero_gap = std::max(zero_gap, std::abs(curve.gap_mean[k]));
    if (k > 0 && !(curve.gap_mean[k] > curve.gap_mean[k - 1])) increasing = false;
    min_gap = std::min(min_gap, curve.gap_min[k]);
  }
  double exponent = std::numeric_limits<double>::quiet_NaN();
  try {
    exponent = fit_loglog_exponent(curve.eps_values, curve.gap_max);
  } catch (const Error&) {
  }
  std::size_t held_out = 0;
  for (std::size_t k = 0; k < curve.eps_values.size(); ++k) {
    if (curve.eps_values[k] > 0.0) {
      held_out = k;
      break;
    }
  }
  if (curve.eps_values.size() > held_out + 1) ++held_out;  // middle positive eps
  if (curve.eps_values[held_out] > 0.0) calibrate_merigot_constant(curve, held_out);

  SuiteResult r{"gap_curve", zero_gap < 1e-8 && increasing && exponent >= spec.min_exponent && min_gap >= -1e-9, {}};
  r.metrics = {{"eps", curve.eps_values},    {"gap_mean", curve.gap_mean},   {"gap_max", curve.gap_max},
               {"gap_min", curve.gap_min},   {"mean_gap_at_zero", zero_gap}, {"mean_strictly_increasing", increasing},
               {"max_gap_exponent", exponent}, {"min_exponent", spec.min_exponent}, {"C_fit", curve.C_fit},
               {"trials", spec.trials},      {"atoms", spec.atoms}};
  if (curve_out) *curve_out = std::move(curve);
  return r;
}

SuiteResult khat_suite(std::size_t cases, std::uint64_t seed, double tol) {
  Rng rng(seed);
  double worst_scale = 0.0, worst_shift = 0.0;
  std::size_t positive = 0;
  for (std::size_t k = 0; k < cases; ++k) {
    const int dim = 2;
    const auto n = static_cast<Eigen::Index>(4 + rng.index(12));
    const auto sigma = normal_uniform(rng, n, dim);
    const auto mu = normal_uniform(rng, n, dim);
    auto khat = [&](const DiscreteMeasure& target) {
      const auto e = embed(sigma, target);
      return estimate_strong_convexity(TransportMap{sigma, e.values, e.provenance, true});
    };
    const double base = khat(mu);
    positive += base > 0.0;
    for (double c : {0.5, 2.0, 4.0}) {
      worst_scale = std::max(worst_scale, std::abs(khat(pushforward(mu, AffineMap::scaling(c, dim))) - c * base));
    }
    const double shifted = khat(pushforward(mu, AffineMap::shift(normal_vector(rng, dim, 3.0))));
    worst_shift = std::max(worst_shift, std::abs(shifted - base));
  }
  SuiteResult r{"khat_scaling", worst_scale < tol && worst_shift < tol, {}};
  r.metrics = {{"cases", cases},
               {"cases_with_positive_khat", positive},
               {"max_scaling_deviation", worst_scale},
               {"max_shift_deviation", worst_shift},
               {"tol", tol}};
  return r;
}

DiscreteMeasure disk_template(double radius, std::size_t atoms) {
  if (atoms < 1 || !(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "disk needs atoms and a positive radius");
  // Vogel spiral: equal-area rings, golden-angle rotation.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Points out(static_cast<Eigen::Index>(atoms), 2);
  for (std::size_t i = 0; i < atoms; ++i) {
    const double r = radius * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(atoms));
    out(static_cast<Eigen::Index>(i), 0) = r * std::cos(golden * static_cast<double>(i));
    out(static_cast<Eigen::Index>(i), 1) = r * std::sin(golden * static_cast<double>(i));
  }
  return DiscreteMeasure::uniform(std::move(out));
}

DiscreteMeasure bar_template(double length, double height, std::size_t atoms) {
  if (atoms < 1 || !(length > 0.0) || !(height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bar needs atoms and positive sides");
  }
  // Additive recurrence with the plastic-number steps.
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  Points out(static_cast<Eigen::Index>(atoms), 2);
  for (std::size_t i = 0; i < atoms; ++i) {
    const double u = std::fmod(0.5 + a1 * static_cast<double>(i + 1), 1.0);
    const double v = std::fmod(0.5 + a2 * static_cast<double>(i + 1), 1.0);
    out(static_cast<Eigen::Index>(i), 0) = (u - 0.5) * length;
    out(static_cast<Eigen::Index>(i), 1) = (v - 0.5) * height;
  }
  return DiscreteMeasure::uniform(std::move(out));
}

UniformGridReference synthetic_reference() { return {{-6.0, -6.0}, {6.0, 6.0}, {8, 6}}; }

namespace {

struct SeparationRun {
  LabeledMeasures data;
  SeparationResult separation;
};

SeparationRun separate_families(const DiscreteMeasure& sigma, const DiscreteMeasure& p, const DiscreteMeasure& q,
                                const SeparabilitySpec& spec, double eps) {
  FamilySpec fp;
  fp.template_measure = p;
  fp.R = spec.R;
  fp.eps = eps;
  fp.count = spec.count;
  fp.seed = derive_seed(spec.seed, 11);
  fp.scale_min = spec.scale_min;
  FamilySpec fq = fp;
  fq.template_measure = q;
  fq.seed = derive_seed(spec.seed, 12);

  SeparationRun run;
  run.data = make_two_class_dataset(fp, fq, spec.subsample);
  FeatureMatrix X;
  X.rows.resize(static_cast<Eigen::Index>(run.data.measures.size()), 2 * sigma.size());
  X.labels = run.data.labels;
  for (std::size_t k = 0; k < run.data.measures.size(); ++k) {
    X.rows.row(static_cast<Eigen::Index>(k)) = embed(sigma, run.data.measures[k]).flattened().transpose();
  }
  run.separation = hard_margin_separate(X);
  return run;
}

}  // namespace

SuiteResult separability_suite(const SeparabilitySpec& spec) {
  const auto disk = disk_template(1.0, spec.atoms);
  const auto bar = bar_template(3.0, 0.5, spec.atoms);
  const auto sigma = select_reference_support(synthetic_reference());

  // C from a gap curve on the disk template, held out at eps = 0.1. The
  // calibration reference is a random sample of the disk of the same size:
  // plans stay permutations but the lattice no longer pins them.
  Rng rng(derive_seed(spec.seed, 9));
  Points cal(disk.size(), 2);
  for (Eigen::Index i = 0; i < cal.rows();) {
    const double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0);
    if (x * x + y * y > 1.0) continue;
    cal(i, 0) = x;
    cal(i, 1) = y;
    ++i;
  }
  GapCurve curve = holder_gap_curve(DiscreteMeasure::uniform(std::move(cal)), disk,
                                    {AffineMap::shift(Vector::Constant(2, 1.0)), AffineMap::scaling(2.0, 2)},
                                    {0.05, 0.1, 0.2}, 10, derive_seed(spec.seed, 10));
  calibrate_merigot_constant(curve, 1);
  const BoundsReport bounds = compute_bounds(sigma, disk, bar, spec.eps, spec.R, curve.C_fit, spec.cell_width);

  const SeparationRun perturbed = separate_families(sigma, disk, bar, spec, spec.eps);
  const SeparationRun exact_orbits = separate_families(sigma, disk, bar, spec, 0.0);

  const bool premise = perturbed.data.min_cross_w2 > bounds.delta;
  const bool separable = perturbed.separation.separable && perturbed.separation.margin > 0.0;
  const bool separable_zero = exact_orbits.separation.separable && exact_orbits.separation.margin > 0.0;
  SuiteResult r{"separability", premise && separable && separable_zero, {}};
  r.metrics = {{"eps", spec.eps},
               {"R", spec.R},
               {"per_class", spec.count},
               {"feature_dim", 2 * sigma.size()},
               {"C_fit", curve.C_fit},
               {"delta", bounds.delta},
               {"min_cross_w2", perturbed.data.min_cross_w2},
               {"subsample", perturbed.data.subsample},
               {"premise_holds", premise},
               {"separable", separable},
               {"margin", perturbed.separation.margin},
               {"separable_at_eps_zero", separable_zero},
               {"margin_at_eps_zero", exact_orbits.separation.margin},
               {"min_cross_w2_at_eps_zero", exact_orbits.data.min_cross_w2},
               {"bounds", bounds_report_to_json(bounds)}};
  return r;
}

DistmatTiming timed_distance_matrices(const DiscreteMeasure& sigma, const std::vector<DiscreteMeasure>& measures,
                                      const std::vector<std::string>& labels, const SolverConfig& solver,
                                      bool with_exact, DistanceMatrix* lot_out, DistanceMatrix* exact_out) {
  DistmatTiming t;
  t.measures = measures.size();
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Embedding> embeddings;
  embeddings.reserve(measures.size());
  for (std::size_t k = 0; k < measures.size(); ++k) embeddings.push_back(embed(sigma, measures[k], solver, labels[k]));
  t.embed_seconds = seconds_since(t0);
  t.embeds = measures.size();

  t0 = std::chrono::steady_clock::now();
  DistanceMatrix lot = distance_matrix(embeddings);
  t.lot_distance_seconds = seconds_since(t0);
  t.lot_distances = measures.size() * (measures.size() - 1) / 2;
  if (lot_out) *lot_out = std::move(lot);

  t.exact_seconds = std::numeric_limits<double>::quiet_NaN();
  if (with_exact) {
    t0 = std::chrono::steady_clock::now();
    DistanceMatrix exact = exact_distance_matrix(measures, labels);
    t.exact_seconds = seconds_since(t0);
    t.exact_solves = t.lot_distances;
    if (exact_out) *exact_out = std::move(exact);
  }
  return t;
}

SuiteResult timing_suite(std::size_t count, std::uint64_t seed) {
  FamilySpec fp;
  fp.template_measure = disk_template(1.0, 48);
  fp.R = 5.0;
  fp.eps = 0.05;
  fp.count = count / 2;
  fp.seed = derive_seed(seed, 1);
  FamilySpec fq = fp;
  fq.template_measure = bar_template(3.0, 0.5, 48);
  fq.count = count - count / 2;
  fq.seed = derive_seed(seed, 2);
  const auto data = make_two_class_dataset(fp, fq, 0);
  const auto sigma = select_reference_support(synthetic_reference());
  const DistmatTiming t = timed_distance_matrices(sigma, data.measures, data.ids, SolverConfig{}, true, nullptr, nullptr);
  const double lot_total = t.embed_seconds + t.lot_distance_seconds;
  SuiteResult r{"timing", lot_total < t.exact_seconds, {}};
  r.metrics = {{"measures", t.measures},
               {"embeds", t.embeds},
               {"lot_distances", t.lot_distances},
               {"exact_solves", t.exact_solves},
               {"embed_seconds", t.embed_seconds},
               {"lot_distance_seconds", t.lot_distance_seconds},
               {"exact_seconds", t.exact_seconds},
               {"speedup", t.exact_seconds / lot_total}};
  return r;
}

}  // namespace lot
