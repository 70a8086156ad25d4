#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lot/bounds.hpp"
#include "lot/datasets.hpp"
#include "lot/families.hpp"
#include "lot/io.hpp"

namespace lot {

// Outcome of one property suite. `metrics` carries the measured slacks.
struct SuiteResult {
  std::string name;
  bool passed = false;
  Json metrics;
};

Json suite_to_json(const SuiteResult& r);

// Network simplex against permutation enumeration on uniform instances with
// N <= 6 in dims 1..3, plus a duality certificate for every solve.
SuiteResult oracle_suite(std::size_t instances, std::uint64_t seed, double tol = 1e-9);

// Uniform triples on the line: LOT distance equals W2.
SuiteResult isometry_1d_suite(std::size_t triples, std::uint64_t seed, double tol = 1e-8);

// Shift/scale pairs h1, h2: LOT distance between the pushforwards equals
// |h1 - h2|_mu and both compatibility defects vanish.
SuiteResult shift_scale_suite(std::size_t cases, std::uint64_t seed, double tol = 1e-8, double compat_tol = 1e-9);

// Random 2D triples: W2 <= LOT <= W2 + composition gap.
SuiteResult sandwich_suite(std::size_t pairs, std::uint64_t seed, double upper_rel_tol = 0.05);

// Exact plans pass the swap test. With inject_crossed a deliberately
// crossed plan is added, so the suite must fail.
SuiteResult cyclic_monotonicity_suite(std::size_t instances, std::uint64_t seed, bool inject_crossed = false);

struct GapSuiteSpec {
  std::vector<double> eps_values{0.0, 0.05, 0.1, 0.2};
  std::size_t trials = 20;
  std::size_t atoms = 60;  // Gaussian template and reference sample size
  double smoothness = 0.5;
  double min_exponent = 0.45;
  std::uint64_t seed = 0;
};

// Gap curve on a 2D Gaussian template: mean gap below 1e-8 at eps = 0,
// strictly increasing means, and a log-log exponent of the max gap of at
// least min_exponent. The returned curve has C calibrated on the middle eps.
SuiteResult gap_curve_suite(const GapSuiteSpec& spec, GapCurve* curve_out = nullptr);

// K-hat of the embedding of c#mu against c * K-hat of mu's embedding, and
// invariance under target shifts.
SuiteResult khat_suite(std::size_t cases, std::uint64_t seed, double tol = 1e-10);

struct SeparabilitySpec {
  double eps = 0.05;
  double R = 5.0;
  std::size_t count = 60;  // measures per class
  std::size_t subsample = 10;
  std::size_t atoms = 48;  // per template, equal to the reference size
  double scale_min = 0.5;
  double cell_width = 0.25;
  std::uint64_t seed = 0;
};

// Two disjoint 2D templates (a filled disk and a filled bar), shift/scale
// families with eps-perturbations, embedded against synthetic_reference(). Checks
// the premise min cross W2 > delta with C calibrated from a gap curve on
// the disk template, then hard-margin separability, then the eps = 0 case.
SuiteResult separability_suite(const SeparabilitySpec& spec);

// Quasi-uniform uniform-weight samples of a disk centered at the origin and
// of a length x height rectangle centered at the origin.
DiscreteMeasure disk_template(double radius, std::size_t atoms);
DiscreteMeasure bar_template(double length, double height, std::size_t atoms);

// 8 x 6 cell centers on [-6, 6]^2: 48 atoms, so uniform 48-atom measures get
// permutation plans.
UniformGridReference synthetic_reference();

struct DistmatTiming {
  std::size_t measures = 0;
  std::size_t embeds = 0;
  std::size_t lot_distances = 0;
  std::size_t exact_solves = 0;
  double embed_seconds = 0.0;
  double lot_distance_seconds = 0.0;
  double exact_seconds = 0.0;  // NaN when the exact matrix was skipped
};

// Builds the LOT matrix (and the exact matrix when requested) and times
// both paths.
DistmatTiming timed_distance_matrices(const DiscreteMeasure& sigma, const std::vector<DiscreteMeasure>& measures,
                                      const std::vector<std::string>& labels, const SolverConfig& solver,
                                      bool with_exact, DistanceMatrix* lot_out, DistanceMatrix* exact_out);

// 40 random 2D measures from two shift/scale families: embeds + distances
// must be faster than the pairwise exact solves.
SuiteResult timing_suite(std::size_t measures, std::uint64_t seed);

}  // namespace lot
