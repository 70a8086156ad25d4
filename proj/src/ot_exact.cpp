#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lot/ot.hpp"

namespace lot {

Eigen::MatrixXd squared_distances(const Points& x, const Points& y) {
  if (x.cols() != y.cols()) throw Error(ErrorCode::DimensionMismatch, "point sets differ in dimension");
  Eigen::MatrixXd c(x.rows(), y.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) c(i, j) = (x.row(i) - y.row(j)).squaredNorm();
  }
  return c;
}

Vector TransportPlan::row_sums() const {
  Vector r = Vector::Zero(static_cast<Eigen::Index>(source.size()));
  for (const auto& e : entries) r(static_cast<Eigen::Index>(e.source)) += e.mass;
  return r;
}

Vector TransportPlan::col_sums() const {
  Vector c = Vector::Zero(static_cast<Eigen::Index>(target.size()));
  for (const auto& e : entries) c(static_cast<Eigen::Index>(e.target)) += e.mass;
  return c;
}

double TransportPlan::max_marginal_error() const {
  return std::max((row_sums() - source.weights()).cwiseAbs().maxCoeff(),
                  (col_sums() - target.weights()).cwiseAbs().maxCoeff());
}

bool TransportPlan::is_deterministic() const {
  std::vector<int> count(source.size(), 0);
  for (const auto& e : entries) ++count[e.source];
  return std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
}

double TransportPlan::recomputed_cost() const {
  double total = 0.0;
  for (const auto& e : entries) {
    total += e.mass * (source.point(e.source) - target.point(e.target)).squaredNorm();
  }
  return total;
}

double TransportPlan::dual_objective() const {
  if (!duals) throw Error(ErrorCode::InvalidArgument, "plan carries no dual potentials");
  return source.weights().dot(duals->source) + target.weights().dot(duals->target);
}

std::string plan_to_csv(const TransportPlan& plan) {
  std::ostringstream out;
  out.precision(17);
  out << "i,j,mass\n";
  for (const auto& e : plan.entries) out << e.source << ',' << e.target << ',' << e.mass << '\n';
  return out.str();
}

namespace {

// Primal network simplex with a strongly feasible spanning tree rooted at an
// artificial node. Nodes [0, n) are sources, [n, n + m) sinks, n + m the root.
// The tree is re-rooted by a full traversal after every pivot, which is
// cheap next to pricing for the support sizes used here.
class NetworkSimplex {
 public:
  NetworkSimplex(const Eigen::MatrixXd& cost, const Vector& supply, const Vector& demand)
      : cost_(cost),
        n_(static_cast<int>(cost.rows())),
        m_(static_cast<int>(cost.cols())),
        real_arcs_(n_ * m_),
        root_(n_ + m_),
        nodes_(n_ + m_ + 1) {
    const double max_cost = cost.size() > 0 ? cost.maxCoeff() : 0.0;
    art_cost_ = (max_cost + 1.0) * static_cast<double>(nodes_);
    eps_ = 1e-12 * (1.0 + max_cost);
    const int total_arcs = real_arcs_ + n_ + m_;
    flow_.assign(static_cast<std::size_t>(total_arcs), 0.0);
    in_tree_.assign(static_cast<std::size_t>(total_arcs), 0);
    adj_.assign(static_cast<std::size_t>(nodes_), {});
    for (int i = 0; i < n_; ++i) {
      const int a = real_arcs_ + i;
      flow_[idx(a)] = supply(i);
      add_tree_arc(a);
    }
    for (int j = 0; j < m_; ++j) {
      const int a = real_arcs_ + n_ + j;
      flow_[idx(a)] = demand(j);
      add_tree_arc(a);
    }
    parent_.assign(static_cast<std::size_t>(nodes_), -1);
    pred_.assign(static_cast<std::size_t>(nodes_), -1);
    up_.assign(static_cast<std::size_t>(nodes_), 0);
    depth_.assign(static_cast<std::size_t>(nodes_), 0);
    pi_.assign(static_cast<std::size_t>(nodes_), 0.0);
    rebuild_tree();
  }

  void run(long long max_pivots) {
    block_ = std::max(10, static_cast<int>(std::sqrt(static_cast<double>(real_arcs_))));
    long long pivots = 0;
    int entering;
    while ((entering = find_entering()) >= 0) {
      pivot(entering);
      if (++pivots > max_pivots) {
        throw Error(ErrorCode::NonConvergence, "network simplex exceeded its pivot budget");
      }
    }
  }

  double flow(int i, int j) const { return flow_[idx(i * m_ + j)]; }
  double artificial_flow() const {
    double total = 0.0;
    for (int a = real_arcs_; a < real_arcs_ + n_ + m_; ++a) total += flow_[idx(a)];
    return total;
  }
  double potential(int node) const { return pi_[idx(node)]; }
  bool optimum_unique() const {
    for (int a = 0; a < real_arcs_; ++a) {
      if (!in_tree_[idx(a)] && reduced_cost(a) <= eps_) return false;
    }
    return true;
  }

 private:
  static std::size_t idx(int k) { return static_cast<std::size_t>(k); }

  int tail(int a) const {
    if (a < real_arcs_) return a / m_;
    if (a < real_arcs_ + n_) return a - real_arcs_;
    return root_;
  }
  int head(int a) const {
    if (a < real_arcs_) return n_ + a % m_;
    if (a < real_arcs_ + n_) return root_;
    return n_ + (a - real_arcs_ - n_);
  }
  double arc_cost(int a) const {
    if (a < real_arcs_) return cost_(a / m_, a % m_);
    return art_cost_;
  }
  double reduced_cost(int a) const { return arc_cost(a) + pi_[idx(tail(a))] - pi_[idx(head(a))]; }

  void add_tree_arc(int a) {
    in_tree_[idx(a)] = 1;
    adj_[idx(tail(a))].push_back(a);
    adj_[idx(head(a))].push_back(a);
  }
  void remove_tree_arc(int a) {
    in_tree_[idx(a)] = 0;
    for (int v : {tail(a), head(a)}) {
      auto& list = adj_[idx(v)];
      list.erase(std::find(list.begin(), list.end(), a));
    }
  }

  void rebuild_tree() {
    stack_.clear();
    stack_.push_back(root_);
    parent_[idx(root_)] = -1;
    pred_[idx(root_)] = -1;
    depth_[idx(root_)] = 0;
    pi_[idx(root_)] = 0.0;
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      for (int a : adj_[idx(u)]) {
        if (a == pred_[idx(u)]) continue;
        const int v = tail(a) == u ? head(a) : tail(a);
        parent_[idx(v)] = u;
        pred_[idx(v)] = a;
        depth_[idx(v)] = depth_[idx(u)] + 1;
        // Tree arcs have zero reduced cost.
        if (tail(a) == v) {
          up_[idx(v)] = 1;
          pi_[idx(v)] = pi_[idx(u)] - arc_cost(a);
        } else {
          up_[idx(v)] = 0;
          pi_[idx(v)] = pi_[idx(u)] + arc_cost(a);
        }
        stack_.push_back(v);
      }
    }
  }

  // Block search pricing over the real arcs; artificial arcs never re-enter.
  int find_entering() {
    int best = -1;
    double best_rc = -eps_;
    int scanned = 0;
    for (int k = 0; k < real_arcs_; ++k) {
      const int a = next_arc_;
      next_arc_ = next_arc_ + 1 == real_arcs_ ? 0 : next_arc_ + 1;
      if (!in_tree_[idx(a)]) {
        const double rc = reduced_cost(a);
        if (rc < best_rc) {
          best_rc = rc;
          best = a;
        }
      }
      if (++scanned == block_) {
        if (best >= 0) return best;
        scanned = 0;
      }
    }
    return best;
  }

  void pivot(int entering) {
    const int first = tail(entering);
    const int second = head(entering);
    int u = first;
    int v = second;
    while (u != v) {
      if (depth_[idx(u)] >= depth_[idx(v)]) {
        u = parent_[idx(u)];
      } else {
        v = parent_[idx(v)];
      }
    }
    const int join = u;

    // Flow moves along entering, then from `second` up to join and from join
    // down to `first`. Taking the last blocking arc in cycle order keeps the
    // tree strongly feasible.
    double delta = std::numeric_limits<double>::infinity();
    int leaving_node = -1;
    for (int w = first; w != join; w = parent_[idx(w)]) {
      if (up_[idx(w)] && flow_[idx(pred_[idx(w)])] < delta) {
        delta = flow_[idx(pred_[idx(w)])];
        leaving_node = w;
      }
    }
    for (int w = second; w != join; w = parent_[idx(w)]) {
      if (!up_[idx(w)] && flow_[idx(pred_[idx(w)])] <= delta) {
        delta = flow_[idx(pred_[idx(w)])];
        leaving_node = w;
      }
    }
    if (leaving_node < 0) throw Error(ErrorCode::NonConvergence, "unbounded pivot cycle");

    const int leaving = pred_[idx(leaving_node)];
    if (delta > 0.0) {
      flow_[idx(entering)] += delta;
      for (int w = first; w != join; w = parent_[idx(w)]) {
        update_flow(pred_[idx(w)], up_[idx(w)] ? -delta : delta);
      }
      for (int w = second; w != join; w = parent_[idx(w)]) {
        update_flow(pred_[idx(w)], up_[idx(w)] ? delta : -delta);
      }
    }
    flow_[idx(leaving)] = 0.0;
    remove_tree_arc(leaving);
    add_tree_arc(entering);
    rebuild_tree();
  }

  void update_flow(int a, double change) {
    double& f = flow_[idx(a)];
    f += change;
    if (f < kFlowSnap) f = 0.0;
  }

  static constexpr double kFlowSnap = 1e-15;

  const Eigen::MatrixXd& cost_;
  int n_, m_, real_arcs_, root_, nodes_;
  double art_cost_ = 0.0;
  double eps_ = 0.0;
  int block_ = 10;
  int next_arc_ = 0;
  std::vector<double> flow_;
  std::vector<char> in_tree_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_, pred_, depth_, stack_;
  std::vector<char> up_;
  std::vector<double> pi_;
};

std::vector<Eigen::Index> positive_atoms(const Vector& w) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) keep.push_back(i);
  }
  return keep;
}

void check_dims(const DiscreteMeasure& sigma, const DiscreteMeasure& nu) {
  if (sigma.size() == 0 || nu.size() == 0) throw Error(ErrorCode::EmptySupport, "empty measure");
  if (sigma.dim() != nu.dim()) throw Error(ErrorCode::DimensionMismatch, "measures differ in dimension");
}

}  // namespace

TransportPlan solve_exact(const DiscreteMeasure& sigma, const DiscreteMeasure& nu) {
  check_dims(sigma, nu);
  const auto rows = positive_atoms(sigma.weights());
  const auto cols = positive_atoms(nu.weights());
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(cols.size());
  const Eigen::MatrixXd full_cost = squared_distances(sigma.points(), nu.points());
  Eigen::MatrixXd cost(n, m);
  Vector supply(n), demand(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    supply(i) = sigma.weights()(rows[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m; ++j) {
      cost(i, j) = full_cost(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) demand(j) = nu.weights()(cols[static_cast<std::size_t>(j)]);

  NetworkSimplex simplex(cost, supply, demand);
  simplex.run(200LL * (n + m) * (n + m) + 100000);
  if (simplex.artificial_flow() > 1e-9) {
    throw Error(ErrorCode::NonConvergence, "artificial arcs still carry flow");
  }

  TransportPlan plan;
  plan.source = sigma;
  plan.target = nu;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double f = simplex.flow(static_cast<int>(i), static_cast<int>(j));
      if (f > 0.0) {
        plan.entries.push_back({static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]),
                                static_cast<std::size_t>(cols[static_cast<std::size_t>(j)]), f});
        plan.cost += f * cost(i, j);
      }
    }
  }
  // Reduced cost c_ij + pi_i - pi_j >= 0 gives f_i = -pi_i, g_j = pi_j.
  // Zero-weight atoms get the tightest feasible potential.
  DualPotentials duals{Vector::Zero(static_cast<Eigen::Index>(sigma.size())),
                       Vector::Zero(static_cast<Eigen::Index>(nu.size()))};
  for (Eigen::Index j = 0; j < m; ++j) {
    duals.target(cols[static_cast<std::size_t>(j)]) = simplex.potential(static_cast<int>(n + j));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    duals.source(rows[static_cast<std::size_t>(i)]) = -simplex.potential(static_cast<int>(i));
  }
  for (Eigen::Index i = 0; i < sigma.weights().size(); ++i) {
    if (sigma.weights()(i) > 0.0) continue;
    duals.source(i) = (full_cost.row(i).transpose() - duals.target).minCoeff();
  }
  for (Eigen::Index j = 0; j < nu.weights().size(); ++j) {
    if (nu.weights()(j) > 0.0) continue;
    duals.target(j) = (full_cost.col(j) - duals.source).minCoeff();
  }
  plan.duals = std::move(duals);
  plan.unique = simplex.optimum_unique();
  return plan;
}

TransportPlan brute_force_oracle(const DiscreteMeasure& sigma, const DiscreteMeasure& nu) {
  check_dims(sigma, nu);
  if (sigma.size() != nu.size() || !sigma.is_uniform() || !nu.is_uniform()) {
    throw Error(ErrorCode::NonUniformWeights, "oracle needs uniform measures of equal size");
  }
  if (sigma.size() > 8) throw Error(ErrorCode::TooLarge, "oracle limited to 8 atoms");
  const std::size_t n = sigma.size();
  const Eigen::MatrixXd cost = squared_distances(sigma.points(), nu.points());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best_perm = perm;
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i]));
    }
    if (total < best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  TransportPlan plan;
  plan.source = sigma;
  plan.target = nu;
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) plan.entries.push_back({i, best_perm[i], w});
  plan.cost = best * w;
  return plan;
}

TransportPlan solve(const DiscreteMeasure& sigma, const DiscreteMeasure& nu, const SolverConfig& config) {
  switch (config.kind) {
    case SolverConfig::Kind::Exact:
      return solve_exact(sigma, nu);
    case SolverConfig::Kind::Sinkhorn:
      return solve_sinkhorn(sigma, nu, config.sinkhorn);
    case SolverConfig::Kind::Auto:
      break;
  }
  if (std::max(sigma.size(), nu.size()) <= config.exact_max_support) return solve_exact(sigma, nu);
  Eigen::MatrixXd c = squared_distances(sigma.points(), nu.points());
  std::vector<double> all(c.data(), c.data() + c.size());
  auto mid = all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2);
  std::nth_element(all.begin(), mid, all.end());
  SinkhornOptions opts = config.sinkhorn;
  opts.reg = config.reg_scale * std::max(*mid, 1e-12);
  return solve_sinkhorn(sigma, nu, opts);
}

}  // namespace lot
