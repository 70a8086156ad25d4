#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "lot/ot.hpp"

namespace lot {

namespace {

struct LogSinkhorn {
  const Eigen::MatrixXd& cost;
  Vector log_a, log_b;
  Vector f, g;

  // f_i = reg * (log a_i - LSE_j((g_j - C_ij) / reg))
  void update_f(double reg) {
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      f(i) = reg * (log_a(i) - lse((g.transpose() - cost.row(i)) / reg));
    }
  }
  void update_g(double reg) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      g(j) = reg * (log_b(j) - lse((f - cost.col(j)) / reg));
    }
  }
  Eigen::MatrixXd plan(double reg) const {
    Eigen::MatrixXd p(cost.rows(), cost.cols());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      for (Eigen::Index j = 0; j < cost.cols(); ++j) p(i, j) = std::exp((f(i) + g(j) - cost(i, j)) / reg);
    }
    return p;
  }
  // After a g update the columns are exact; measure the row error.
  double row_error(double reg, const Vector& a) const {
    double err = 0.0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < cost.cols(); ++j) s += std::exp((f(i) + g(j) - cost(i, j)) / reg);
      err += std::abs(s - a(i));
    }
    return err;
  }

  template <typename Derived>
  static double lse(const Eigen::MatrixBase<Derived>& v) {
    const double mx = v.maxCoeff();
    if (!std::isfinite(mx)) return mx;
    return mx + std::log((v.array() - mx).exp().sum());
  }
};

// Rescale rows then columns so no marginal is exceeded, then spread the
// remaining row deficit over the column deficit with a rank-one update.
void round_to_polytope(Eigen::MatrixXd& p, const Vector& a, const Vector& b) {
  Vector r = p.rowwise().sum();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (r(i) > a(i)) p.row(i) *= a(i) / r(i);
  }
  Vector c = p.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    if (c(j) > b(j)) p.col(j) *= b(j) / c(j);
  }
  const Vector err_r = (a - p.rowwise().sum()).cwiseMax(0.0);
  const Vector err_c = (b - p.colwise().sum().transpose()).cwiseMax(0.0);
  const double total = err_r.sum();
  if (total > 0.0) p += err_r * err_c.transpose() / total;
}

}  // namespace

TransportPlan solve_sinkhorn(const DiscreteMeasure& sigma, const DiscreteMeasure& nu,
                             const SinkhornOptions& options) {
  if (!(options.reg > 0.0)) throw Error(ErrorCode::InvalidArgument, "regularization must be positive");
  if (sigma.dim() != nu.dim()) throw Error(ErrorCode::DimensionMismatch, "measures differ in dimension");
  const Eigen::MatrixXd cost = squared_distances(sigma.points(), nu.points());
  const Vector& a = sigma.weights();
  const Vector& b = nu.weights();

  LogSinkhorn s{cost, a.array().log().matrix(), b.array().log().matrix(),
                Vector::Zero(a.size()), Vector::Zero(b.size())};

  std::vector<double> schedule;
  if (options.anneal) {
    for (double r = std::max(options.reg, cost.maxCoeff()); r > options.reg; r /= 4.0) schedule.push_back(r);
  }
  schedule.push_back(options.reg);

  double err = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
    const double reg = schedule[stage];
    const bool last = stage + 1 == schedule.size();
    const double stage_tol = last ? options.tol : std::max(options.tol, 1e-3);
    const int stage_iters = last ? options.max_iters : std::min(options.max_iters, 500);
    for (int it = 0; it < stage_iters; ++it) {
      s.update_f(reg);
      s.update_g(reg);
      if (last) ++iters;
      if (it % 10 == 9 || it + 1 == stage_iters) {
        err = s.row_error(reg, a);
        if (err < stage_tol) break;
      }
    }
  }

  Eigen::MatrixXd p = s.plan(options.reg);
  TransportPlan plan;
  plan.source = sigma;
  plan.target = nu;
  plan.entropic_reg = options.reg;
  plan.unique = false;
  plan.converged = err < options.tol;
  plan.unrounded_marginal_error = err;
  if (!plan.converged) {
    spdlog::warn("sinkhorn did not converge: marginal error {} after {} iterations", err, iters);
  }
  round_to_polytope(p, a, b);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) {
        plan.entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), p(i, j)});
        plan.cost += p(i, j) * cost(i, j);
      }
    }
  }
  plan.duals = DualPotentials{s.f, s.g};
  return plan;
}

}  // namespace lot
