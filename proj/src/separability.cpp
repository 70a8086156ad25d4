#include <cmath>
#include <limits>
#include <vector>

#include "lot/classify.hpp"

namespace lot {

namespace {

// Phase-one simplex for {z >= 0 : A z = b} with b >= 0. Returns the minimal
// total infeasibility. Dantzig pricing, falling back to Bland's rule after a
// run of degenerate pivots so the method terminates.
double phase_one_infeasibility(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  const Eigen::Index cols = n + m;
  // Rows 0..m-1 are constraints, row m is the reduced-cost row; last column rhs.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  t.topLeftCorner(m, n) = A;
  t.block(0, n, m, m).setIdentity();
  t.col(cols).head(m) = b;
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) basis[static_cast<std::size_t>(r)] = n + r;
  // Objective sum of artificials, expressed in the nonbasic columns.
  t.row(m).head(n) = -A.colwise().sum();
  t(m, cols) = -b.sum();

  constexpr double kTol = 1e-11;
  int degenerate_run = 0;
  const long long max_pivots = 50'000 + 100LL * cols;
  for (long long it = 0; it < max_pivots; ++it) {
    const bool bland = degenerate_run > 50;
    Eigen::Index enter = -1;
    double best = -kTol;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (t(m, j) < best) {
        enter = j;
        if (bland) break;
        best = t(m, j);
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < m; ++r) {
      if (t(r, enter) > kTol) {
        const double q = t(r, cols) / t(r, enter);
        if (q < ratio - 1e-15 ||
            (q <= ratio + 1e-15 && leave >= 0 &&
             basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
          ratio = q;
          leave = r;
        }
      }
    }
    if (leave < 0) break;  // unbounded direction cannot occur in phase one
    degenerate_run = ratio <= 1e-15 ? degenerate_run + 1 : 0;
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index r = 0; r <= m; ++r) {
      if (r != leave && t(r, enter) != 0.0) t.row(r) -= t(r, enter) * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  return -t(m, cols);
}

}  // namespace

SeparationResult hard_margin_separate(const FeatureMatrix& X) {
  X.validate();
  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index i = 0; i < X.size(); ++i) (X.labels[static_cast<std::size_t>(i)] > 0 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw Error(ErrorCode::InvalidArgument, "both classes must be present");
  const Eigen::Index d = X.feature_dim();
  const auto np = static_cast<Eigen::Index>(pos.size());
  const auto nq = static_cast<Eigen::Index>(neg.size());

  // Stack P then Q, centered (the hull distance is translation invariant).
  Eigen::MatrixXd pts(np + nq, d);
  for (Eigen::Index k = 0; k < np; ++k) pts.row(k) = X.rows.row(pos[static_cast<std::size_t>(k)]);
  for (Eigen::Index k = 0; k < nq; ++k) pts.row(np + k) = X.rows.row(neg[static_cast<std::size_t>(k)]);
  const Eigen::RowVectorXd center = pts.colwise().mean();
  pts.rowwise() -= center;
  const double scale = std::max(pts.cwiseAbs().maxCoeff(), 1e-300);

  SeparationResult result;
  {
    // Hulls intersect iff some alpha, beta in the simplices give P^T alpha = Q^T beta.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d + 2, np + nq);
    A.topLeftCorner(d, np) = pts.topRows(np).transpose() / scale;
    A.topRightCorner(d, nq) = -pts.bottomRows(nq).transpose() / scale;
    A.block(d, 0, 1, np).setOnes();
    A.block(d + 1, np, 1, nq).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 2);
    b(d) = b(d + 1) = 1.0;
    if (phase_one_infeasibility(A, b) <= 1e-9) {
      result.separable = false;
      return result;
    }
  }

  // Nearest points of the two hulls by pairwise Frank-Wolfe on the weights,
  // tracking s_k = <x_k, z> through the Gram matrix.
  const Eigen::MatrixXd gram = pts * pts.transpose();
  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(np, 1.0 / static_cast<double>(np));
  Eigen::VectorXd beta = Eigen::VectorXd::Constant(nq, 1.0 / static_cast<double>(nq));
  Eigen::VectorXd z = pts.topRows(np).transpose() * alpha - pts.bottomRows(nq).transpose() * beta;
  Eigen::VectorXd s = pts * z;
  double z2 = z.squaredNorm();
  const long long max_iters = 2'000'000;
  for (long long it = 0; it < max_iters; ++it) {
    Eigen::Index p_in = 0, p_out = -1, q_in = 0, q_out = -1;
    s.head(np).minCoeff(&p_in);
    s.tail(nq).maxCoeff(&q_in);
    for (Eigen::Index k = 0; k < np; ++k) {
      if (alpha(k) > 0.0 && (p_out < 0 || s(k) > s(p_out))) p_out = k;
    }
    for (Eigen::Index k = 0; k < nq; ++k) {
      if (beta(k) > 0.0 && (q_out < 0 || s(np + k) < s(np + q_out))) q_out = k;
    }
    const double zn = std::sqrt(std::max(z2, 0.0));
    const double lower = zn > 0.0 ? (s(p_in) - s(np + q_in)) / zn : 0.0;
    if (zn <= 1e-14 * scale || zn - lower <= 1e-10 * std::max(zn, 1e-12 * scale)) break;

    const double gap_p = s(p_out) - s(p_in);
    const double gap_q = s(np + q_in) - s(np + q_out);
    Eigen::Index a, c;
    double limit, gap, sign;
    if (gap_p >= gap_q) {
      a = p_in; c = p_out; limit = alpha(p_out); gap = gap_p; sign = 1.0;  // z += t (x_a - x_c)
    } else {
      a = np + q_in; c = np + q_out; limit = beta(q_out); gap = gap_q; sign = -1.0;  // z -= t (y_a - y_c)
    }
    const double dd = gram(a, a) + gram(c, c) - 2.0 * gram(a, c);
    if (!(dd > 0.0) || !(gap > 0.0)) break;
    const double step = std::min(gap / dd, limit);
    if (sign > 0) {
      alpha(a) += step;
      alpha(c) -= step;
      if (step == limit) alpha(c) = 0.0;
    } else {
      beta(a - np) += step;
      beta(c - np) -= step;
      if (step == limit) beta(c - np) = 0.0;
    }
    s += sign * step * (gram.col(a) - gram.col(c));
    z2 += -2.0 * step * gap + step * step * dd;
  }
  z = pts.topRows(np).transpose() * alpha - pts.bottomRows(nq).transpose() * beta;
  const double zn = z.norm();
  result.hull_distance = zn;
  result.separable = true;
  result.model.kind = LinearModel::Kind::HardMargin;
  result.model.weights = zn > 0.0 ? Eigen::VectorXd(z / zn) : Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd proj = pts * result.model.weights;
  const double p_min = proj.head(np).minCoeff();
  const double q_max = proj.tail(nq).maxCoeff();
  result.margin = 0.5 * (p_min - q_max);
  result.model.bias = 0.5 * (p_min + q_max) + result.model.weights.dot(center.transpose());
  return result;
}

}  // namespace lot
