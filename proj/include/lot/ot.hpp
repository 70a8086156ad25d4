#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lot/measures.hpp"

namespace lot {

struct PlanEntry {
  std::size_t source;
  std::size_t target;
  double mass;
};

struct DualPotentials {
  Vector source;  // f_i
  Vector target;  // g_j, with f_i + g_j <= |x_i - y_j|^2
};

// A coupling between two discrete measures for the squared Euclidean cost.
struct TransportPlan {
  DiscreteMeasure source;
  DiscreteMeasure target;
  std::vector<PlanEntry> entries;  // sorted by (source, target), masses > 0
  double cost = 0.0;
  std::optional<DualPotentials> duals;
  bool converged = true;
  // True when no non-basic arc has zero reduced cost, which certifies that
  // the optimal plan is unique. Only meaningful for exact plans.
  bool unique = true;
  // Entropic plans only: regularization and marginal error before rounding.
  double entropic_reg = 0.0;
  double unrounded_marginal_error = 0.0;

  Vector row_sums() const;
  Vector col_sums() const;
  double max_marginal_error() const;
  // Every source atom is sent to exactly one target atom.
  bool is_deterministic() const;
  // sum mass_ij |x_i - y_j|^2 recomputed from the entries.
  double recomputed_cost() const;
  double dual_objective() const;
};

enum class MapProvenance { Exact, Barycentric, OneDim };

// T(x_i) for every atom x_i of the source measure.
struct TransportMap {
  DiscreteMeasure source;
  Points values;
  MapProvenance provenance = MapProvenance::Exact;
  bool plan_unique = true;

  MapSamples samples() const { return {source, values}; }
};

struct SinkhornOptions {
  double reg = 1e-2;
  int max_iters = 10000;
  double tol = 1e-9;  // l1 marginal error of the unrounded plan
  // Solve a decreasing sequence of regularizations first, warm starting
  // the potentials.
  bool anneal = true;
};

struct SolverConfig {
  enum class Kind { Exact, Sinkhorn, Auto };
  Kind kind = Kind::Exact;
  SinkhornOptions sinkhorn;
  // Auto: exact up to this many atoms on either side, Sinkhorn above with
  // reg = reg_scale * median squared pairwise distance.
  std::size_t exact_max_support = 300;
  double reg_scale = 1e-2;
};

Eigen::MatrixXd squared_distances(const Points& x, const Points& y);

// Network simplex on the bipartite transportation problem. Throws
// DimensionMismatch; NonConvergence signals a solver bug.
TransportPlan solve_exact(const DiscreteMeasure& sigma, const DiscreteMeasure& nu);

// Enumerates all N! pairings. Requires uniform weights with equal sizes
// N <= 8 (NonUniformWeights, TooLarge).
TransportPlan brute_force_oracle(const DiscreteMeasure& sigma, const DiscreteMeasure& nu);

// Log-domain Sinkhorn followed by rounding onto the transport polytope.
TransportPlan solve_sinkhorn(const DiscreteMeasure& sigma, const DiscreteMeasure& nu,
                             const SinkhornOptions& options);

TransportPlan solve(const DiscreteMeasure& sigma, const DiscreteMeasure& nu,
                    const SolverConfig& config);

// Monotone rearrangement on the line. Throws AtomSplitRequired when some
// source atom would have to be split across target atoms.
TransportMap solve_1d(const DiscreteMeasure& sigma, const DiscreteMeasure& nu);

// Conditional mean of the plan per source atom. Throws ZeroWeightAtom.
TransportMap barycentric_map(const TransportPlan& plan);

// |T - Id| in L2(source)
double map_cost(const TransportMap& map);

struct MonotonicityReport {
  std::size_t violations = 0;
  double worst = 0.0;
  // max over violating pairs of min(mass) * violation: the cost that a
  // single swap would save.
  double worst_weighted = 0.0;
};

// Pairwise swap test over all pairs of plan entries with mass above
// mass_threshold.
MonotonicityReport cyclic_monotonicity_violations(const TransportPlan& plan, double tol = 1e-9,
                                                  double mass_threshold = 0.0);

// "i,j,mass" lines with a header.
std::string plan_to_csv(const TransportPlan& plan);

}  // namespace lot
