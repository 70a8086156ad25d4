#include <algorithm>
#include <cmath>
#include <numeric>

#include "lot/ot.hpp"

namespace lot {

TransportMap solve_1d(const DiscreteMeasure& sigma, const DiscreteMeasure& nu) {
  if (sigma.dim() != 1 || nu.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "solve_1d needs 1D measures");
  auto sorted_order = [](const DiscreteMeasure& m) {
    std::vector<std::size_t> order(m.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      return m.points()(static_cast<Eigen::Index>(l), 0) < m.points()(static_cast<Eigen::Index>(r), 0);
    });
    return order;
  };
  const auto src = sorted_order(sigma);
  const auto tgt = sorted_order(nu);
  constexpr double kTol = 1e-12;

  TransportMap map{sigma, Points(static_cast<Eigen::Index>(sigma.size()), 1), MapProvenance::OneDim, true};
  // Quantile interval of each source atom must sit inside one target atom's.
  std::size_t t = 0;
  double source_cdf = 0.0;
  double target_hi = nu.weight(tgt[0]);
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double w = sigma.weight(src[k]);
    const double lo = source_cdf;
    const double hi = source_cdf + w;
    source_cdf = hi;
    if (w == 0.0) {
      map.values(static_cast<Eigen::Index>(src[k]), 0) = nu.points()(static_cast<Eigen::Index>(tgt[t]), 0);
      continue;
    }
    while (t + 1 < tgt.size() && lo >= target_hi - kTol) {
      ++t;
      target_hi += nu.weight(tgt[t]);
    }
    if (hi > target_hi + kTol) {
      throw Error(ErrorCode::AtomSplitRequired, "source atom straddles two target atoms");
    }
    map.values(static_cast<Eigen::Index>(src[k]), 0) = nu.points()(static_cast<Eigen::Index>(tgt[t]), 0);
  }
  return map;
}

TransportMap barycentric_map(const TransportPlan& plan) {
  const DiscreteMeasure& sigma = plan.source;
  Points values = Points::Zero(static_cast<Eigen::Index>(sigma.size()), sigma.dim());
  for (const auto& e : plan.entries) {
    values.row(static_cast<Eigen::Index>(e.source)) +=
        e.mass * plan.target.points().row(static_cast<Eigen::Index>(e.target));
  }
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma.weight(i) > 0.0)) throw Error(ErrorCode::ZeroWeightAtom, "source atom has zero weight");
    values.row(static_cast<Eigen::Index>(i)) /= sigma.weight(i);
  }
  const bool deterministic = plan.is_deterministic();
  return {sigma, std::move(values), deterministic ? MapProvenance::Exact : MapProvenance::Barycentric,
          plan.unique};
}

double map_cost(const TransportMap& map) {
  return weighted_rms(map.source.weights(), map.values, map.source.points());
}

MonotonicityReport cyclic_monotonicity_violations(const TransportPlan& plan, double tol,
                                                  double mass_threshold) {
  std::vector<PlanEntry> support;
  for (const auto& e : plan.entries) {
    if (e.mass > mass_threshold) support.push_back(e);
  }
  const Eigen::MatrixXd cost = squared_distances(plan.source.points(), plan.target.points());
  MonotonicityReport report;
  for (std::size_t p = 0; p < support.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(support[p].source);
    const auto j = static_cast<Eigen::Index>(support[p].target);
    for (std::size_t q = p + 1; q < support.size(); ++q) {
      const auto k = static_cast<Eigen::Index>(support[q].source);
      const auto l = static_cast<Eigen::Index>(support[q].target);
      const double excess = cost(i, j) + cost(k, l) - cost(i, l) - cost(k, j);
      if (excess > tol) {
        ++report.violations;
        report.worst = std::max(report.worst, excess);
        report.worst_weighted =
            std::max(report.worst_weighted, std::min(support[p].mass, support[q].mass) * excess);
      }
    }
  }
  return report;
}

}  // namespace lot
