#pragma once

#include <vector>

#include "dga/oracle.hpp"
#include "dga/solver.hpp"

namespace dga {

/// Weighted (semi-)norm over stacked (x, y, lambda) differences used as the
/// Lyapunov function: ||v||^2 = vx'vx - alpha vx'A'vy
/// + alpha eta vy'(I - (rho/eta)W)vy + (alpha/rho) vl'W^+ vl.
/// The symmetric part S is PSD whenever the theorem1 parameter bounds hold.
class OmegaMetric {
public:
  OmegaMetric(const CoupledProblem& problem, const Hyperparameters& hp);

  double norm_sq(const Vec& vx, const Vec& vy, const Vec& vl) const;
  double norm_sq_diff(const SystemState& a, const SystemState& b) const;

  /// Dense S = (Omega + Omega')/2, built on demand (analysis use only).
  const Mat& dense_S() const;
  double min_eigenvalue_S() const;
  bool positive_semidefinite(double tol = 1e-9) const;

  const Hyperparameters& params() const { return hp_; }

private:
  Hyperparameters hp_;
  int n_, m_, p_;
  Mat laplacian_;
  Mat laplacian_pinv_;
  std::vector<Mat> coupling_;  // A_i
  mutable Mat S_;              // lazily built
  mutable bool have_S_ = false;
};

/// (x*, y* = 1 (x) delta*, lambda* = -(A x* - d)) as a SystemState.
SystemState fixed_point_state(const CoupledProblem& problem,
                              const CentralizedSolution& sol);

struct MarginReport {
  std::vector<double> margins;
  double min_margin = 0.0;
  double scale = 1.0;  // 1 + ||h^0 - h*||^2_Omega
  bool ok = false;     // every margin >= -1e-9 * scale
};

/// Per-round check of the descent inequality
/// ||h^k-h*||^2 - ||h^{k+1}-h*||^2 >= ||dh^{k+1}||^2 - alpha l_f ||dx^{k+1}||^2.
MarginReport verify_lemma1(const std::vector<SystemState>& snapshots,
                           const SystemState& h_star, const OmegaMetric& metric,
                           double l_f);

/// Monotone nonincrease of ||dh^k||^2_Omega. scale as in verify_lemma1.
MarginReport verify_lemma2(const std::vector<SystemState>& snapshots,
                           const OmegaMetric& metric, double scale);

/// Every prefix sum of ||dh^{t+1}||^2_Omega stays below
/// ||h^0 - h*||^2_Omega / (1 - alpha l_f).
bool check_summation_bound(const std::vector<SystemState>& snapshots,
                           const SystemState& h_star, const OmegaMetric& metric,
                           double l_f);

struct ResidualRecord {
  long round = 0;
  double feas_sq = 0.0;
  double opt_sq = 0.0;
  double consensus_sq = 0.0;
  double dist_sq = 0.0;
  double delta_h_omega_sq = 0.0;
  double gap_omega_sq = 0.0;
};

ResidualRecord kkt_residuals(const SystemState& prev, const SystemState& next,
                             const CoupledProblem& problem,
                             const OmegaMetric* metric = nullptr,
                             const SystemState* h_star = nullptr);

enum class RateMode { sublinear, linear };

struct RateReport {
  RateMode mode = RateMode::sublinear;
  double tail_ratio = 0.0;  // sublinear: tail max of k*s_k over global max
  double slope = 0.0;       // linear: least-squares slope of log gap^2 vs k
  double r2 = 0.0;
  bool ok = false;
};

/// sublinear: series holds ||dh^k||^2_Omega; asserts the last-20% maximum
/// of k * series[k] is below 1% of its global maximum.
/// linear: series holds Omega-norm gaps ||h^k - h*||_Omega; fits
/// log(gap^2) against k over the tail and asserts slope < 0, R^2 >= 0.99.
RateReport estimate_rate(const std::vector<double>& series, RateMode mode);

}  // namespace dga
