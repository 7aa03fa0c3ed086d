#include "dga/analysis.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace dga {

OmegaMetric::OmegaMetric(const CoupledProblem& problem, const Hyperparameters& hp)
    : hp_(hp),
      n_(problem.num_agents()),
      m_(problem.m()),
      p_(problem.p()),
      laplacian_(problem.graph().laplacian()),
      laplacian_pinv_(laplacian_pseudoinverse(laplacian_)) {
  coupling_.reserve(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) coupling_.push_back(problem.agent(i).A);
}

double OmegaMetric::norm_sq(const Vec& vx, const Vec& vy, const Vec& vl) const {
  if (vx.size() != static_cast<Eigen::Index>(n_) * p_ ||
      vy.size() != static_cast<Eigen::Index>(n_) * m_ ||
      vl.size() != static_cast<Eigen::Index>(n_) * m_)
    throw std::invalid_argument("OmegaMetric: dimension mismatch");

  double cross = 0.0;
  for (int i = 0; i < n_; ++i)
    cross += vx.segment(static_cast<Eigen::Index>(i) * p_, p_)
                 .dot(coupling_[static_cast<std::size_t>(i)].transpose() *
                      vy.segment(static_cast<Eigen::Index>(i) * m_, m_));

  Vec w_vy = apply_block_operator(laplacian_, vy, m_);
  Vec wp_vl = apply_block_operator(laplacian_pinv_, vl, m_);

  return vx.squaredNorm() - hp_.alpha * cross +
         hp_.alpha * hp_.eta * (vy.squaredNorm() - hp_.rho / hp_.eta * vy.dot(w_vy)) +
         hp_.alpha / hp_.rho * vl.dot(wp_vl);
}

double OmegaMetric::norm_sq_diff(const SystemState& a, const SystemState& b) const {
  return norm_sq(a.x - b.x, a.y - b.y, a.lambda - b.lambda);
}

const Mat& OmegaMetric::dense_S() const {
  if (have_S_) return S_;
  const Eigen::Index np = static_cast<Eigen::Index>(n_) * p_;
  const Eigen::Index nm = static_cast<Eigen::Index>(n_) * m_;
  Mat omega = Mat::Zero(np + 2 * nm, np + 2 * nm);
  omega.topLeftCorner(np, np).setIdentity();

  Mat a_block = Mat::Zero(nm, np);  // block-diagonal coupling matrix
  for (int i = 0; i < n_; ++i)
    a_block.block(static_cast<Eigen::Index>(i) * m_,
                  static_cast<Eigen::Index>(i) * p_, m_, p_) =
        coupling_[static_cast<std::size_t>(i)];
  omega.block(0, np, np, nm) = -hp_.alpha * a_block.transpose();

  Mat w = Eigen::kroneckerProduct(laplacian_, Mat::Identity(m_, m_)).eval();
  omega.block(np, np, nm, nm) =
      hp_.alpha * hp_.eta * (Mat::Identity(nm, nm) - hp_.rho / hp_.eta * w);
  omega.block(np + nm, np + nm, nm, nm) =
      hp_.alpha / hp_.rho *
      Eigen::kroneckerProduct(laplacian_pinv_, Mat::Identity(m_, m_)).eval();

  S_ = 0.5 * (omega + omega.transpose());
  have_S_ = true;
  return S_;
}

double OmegaMetric::min_eigenvalue_S() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(dense_S());
  return es.eigenvalues()(0);
}

bool OmegaMetric::positive_semidefinite(double tol) const {
  return min_eigenvalue_S() >= -tol;
}

SystemState fixed_point_state(const CoupledProblem& problem,
                              const CentralizedSolution& sol) {
  const int n = problem.num_agents();
  const int m = problem.m();
  const int p = problem.p();
  SystemState s;
  s.x = sol.x;
  s.y.resize(static_cast<Eigen::Index>(n) * m);
  s.lambda.resize(static_cast<Eigen::Index>(n) * m);
  for (int i = 0; i < n; ++i) {
    s.y.segment(static_cast<Eigen::Index>(i) * m, m) = sol.delta;
    s.lambda.segment(static_cast<Eigen::Index>(i) * m, m) =
        -(problem.agent(i).A * sol.x.segment(static_cast<Eigen::Index>(i) * p, p) -
          problem.agent(i).d);
  }
  s.t = Vec::Zero(static_cast<Eigen::Index>(n) * m);  // consensus y has W y = 0
  s.round = -1;
  return s;
}

MarginReport verify_lemma1(const std::vector<SystemState>& snapshots,
                           const SystemState& h_star, const OmegaMetric& metric,
                           double l_f) {
  if (snapshots.size() < 2)
    throw std::invalid_argument("verify_lemma1: need at least 2 snapshots");
  MarginReport rep;
  rep.scale = 1.0 + metric.norm_sq_diff(snapshots.front(), h_star);
  double gap_prev = metric.norm_sq_diff(snapshots[0], h_star);
  for (std::size_t k = 0; k + 1 < snapshots.size(); ++k) {
    double gap_next = metric.norm_sq_diff(snapshots[k + 1], h_star);
    double dh = metric.norm_sq_diff(snapshots[k + 1], snapshots[k]);
    double dx = (snapshots[k + 1].x - snapshots[k].x).squaredNorm();
    double margin = (gap_prev - gap_next) -
                    (dh - metric.params().alpha * l_f * dx);
    rep.margins.push_back(margin);
    gap_prev = gap_next;
  }
  rep.min_margin = *std::min_element(rep.margins.begin(), rep.margins.end());
  rep.ok = rep.min_margin >= -1e-9 * rep.scale;
  return rep;
}

MarginReport verify_lemma2(const std::vector<SystemState>& snapshots,
                           const OmegaMetric& metric, double scale) {
  if (snapshots.size() < 3)
    throw std::invalid_argument("verify_lemma2: need at least 3 snapshots");
  MarginReport rep;
  rep.scale = scale;
  double prev = metric.norm_sq_diff(snapshots[1], snapshots[0]);
  for (std::size_t k = 2; k < snapshots.size(); ++k) {
    double cur = metric.norm_sq_diff(snapshots[k], snapshots[k - 1]);
    rep.margins.push_back(prev - cur);
    prev = cur;
  }
  rep.min_margin = *std::min_element(rep.margins.begin(), rep.margins.end());
  rep.ok = rep.min_margin >= -1e-9 * rep.scale;
  return rep;
}

bool check_summation_bound(const std::vector<SystemState>& snapshots,
                           const SystemState& h_star, const OmegaMetric& metric,
                           double l_f) {
  double alpha = metric.params().alpha;
  if (alpha * l_f >= 1.0) return false;
  double bound = metric.norm_sq_diff(snapshots.front(), h_star) / (1.0 - alpha * l_f);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < snapshots.size(); ++k) {
    acc += metric.norm_sq_diff(snapshots[k + 1], snapshots[k]);
    if (!(acc < bound)) return false;
  }
  return true;
}

ResidualRecord kkt_residuals(const SystemState& prev, const SystemState& next,
                             const CoupledProblem& problem,
                             const OmegaMetric* metric,
                             const SystemState* h_star) {
  ResidualRecord rec;
  rec.round = next.round;
  rec.feas_sq = problem.coupling_residual(next.x).squaredNorm();
  rec.opt_sq = (next.x - prev.x).squaredNorm();
  rec.consensus_sq = next.y.dot(apply_mixing(problem.graph(), next.y, problem.m()));
  if (metric) rec.delta_h_omega_sq = metric->norm_sq_diff(next, prev);
  if (metric && h_star) {
    rec.gap_omega_sq = metric->norm_sq_diff(next, *h_star);
    rec.dist_sq = (next.x - h_star->x).squaredNorm();
  }
  return rec;
}

RateReport estimate_rate(const std::vector<double>& series, RateMode mode) {
  RateReport rep;
  rep.mode = mode;
  if (series.size() < 100)
    throw std::invalid_argument("estimate_rate: need a trace of length >= 100");

  if (mode == RateMode::sublinear) {
    double global_max = 0.0, tail_max = 0.0;
    std::size_t tail_begin = series.size() - series.size() / 5;
    for (std::size_t k = 0; k < series.size(); ++k) {
      double v = static_cast<double>(k) * series[k];
      global_max = std::max(global_max, v);
      if (k >= tail_begin) tail_max = std::max(tail_max, v);
    }
    rep.tail_ratio = global_max > 0.0 ? tail_max / global_max : 0.0;
    rep.ok = rep.tail_ratio <= 0.01;
    return rep;
  }

  // Linear fit of log(gap^2) vs k over the tail of the decaying portion.
  // The series is truncated at the first entry within 7 decades of its
  // start (or at 1e-13 absolute), so a converged run's numerical plateau
  // does not flatten the fit; a non-decaying series is never truncated and
  // fails on its zero slope.
  const double floor_level = std::max(1e-13, series.front() * 1e-7);
  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k] <= floor_level && k > 0) break;
    if (series[k] > 0.0)
      points.push_back({static_cast<double>(k), 2.0 * std::log(series[k])});
  }
  if (points.size() < 20)
    throw std::invalid_argument("estimate_rate: too few usable points for the fit");
  std::size_t tail_begin = points.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  double count = 0;
  for (std::size_t k = tail_begin; k < points.size(); ++k) {
    auto [x, y] = points[k];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    count += 1;
  }
  double denom = count * sxx - sx * sx;
  rep.slope = (count * sxy - sx * sy) / denom;
  double ss_tot = syy - sy * sy / count;
  double intercept = (sy - rep.slope * sx) / count;
  double ss_res = 0.0;
  for (std::size_t k = tail_begin; k < points.size(); ++k) {
    auto [x, y] = points[k];
    double e = y - (intercept + rep.slope * x);
    ss_res += e * e;
  }
  rep.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  rep.ok = rep.slope < 0.0 && rep.r2 >= 0.99;
  return rep;
}

}  // namespace dga
