#include "dga/problem.hpp"

#include <cmath>
#include <limits>

namespace dga {

CoupledProblem::CoupledProblem(std::vector<AgentSpec> agents, NetworkGraph graph,
                               int m, int p)
    : agents_(std::move(agents)), graph_(std::move(graph)), m_(m), p_(p) {
  const int n = num_agents();
  if (n == 0) throw std::invalid_argument("CoupledProblem: no agents");
  if (graph_.size() != n)
    throw std::invalid_argument("CoupledProblem: graph size must match agent count");
  if (m_ <= 0 || p_ <= 0)
    throw std::invalid_argument("CoupledProblem: m and p must be positive");
  if (m_ > n * p_)
    throw std::invalid_argument("CoupledProblem: requires m <= n*p");

  bool any_nonzero = false;
  l_f_ = 0.0;
  mu_ = std::numeric_limits<double>::infinity();
  coupling_norm_ = 0.0;
  for (const auto& a : agents_) {
    if (a.objective.dim() != p_ || a.set.dim() != p_ || a.A.rows() != m_ ||
        a.A.cols() != p_ || a.d.size() != m_)
      throw std::invalid_argument("CoupledProblem: agent dimensions inconsistent");
    if (a.A.cwiseAbs().maxCoeff() > 0.0) any_nonzero = true;
    Vec lo(p_), hi(p_);
    for (int j = 0; j < p_; ++j) {
      lo(j) = a.set.lower(j);
      hi(j) = a.set.upper(j);
    }
    auto [lf, mu] = a.objective.smoothness_on(lo, hi);
    l_f_ = std::max(l_f_, lf);
    mu_ = std::min(mu_, mu);
    coupling_norm_ =
        std::max(coupling_norm_, a.A.jacobiSvd().singularValues()(0));
  }
  if (!any_nonzero)
    throw std::invalid_argument("CoupledProblem: coupling matrices must not all be zero");
}

Vec CoupledProblem::coupling_residual(const Vec& x) const {
  const int n = num_agents();
  if (x.size() != static_cast<Eigen::Index>(n) * p_)
    throw std::invalid_argument("coupling_residual: dimension mismatch");
  Vec r = Vec::Zero(m_);
  for (int i = 0; i < n; ++i)
    r += agents_[static_cast<std::size_t>(i)].A *
             x.segment(static_cast<Eigen::Index>(i) * p_, p_) -
         agents_[static_cast<std::size_t>(i)].d;
  return r;
}

Vec CoupledProblem::sum_d() const {
  Vec s = Vec::Zero(m_);
  for (const auto& a : agents_) s += a.d;
  return s;
}

double KktReport::max_residual() const {
  return std::max(feasibility, std::max(stationarity, membership));
}

KktReport kkt_check(const CoupledProblem& problem, const Vec& x, const Vec& delta) {
  const int n = problem.num_agents();
  const int p = problem.p();
  if (delta.size() != problem.m())
    throw std::invalid_argument("kkt_check: multiplier dimension mismatch");
  KktReport rep;
  rep.feasibility = problem.coupling_residual(x).norm();
  for (int i = 0; i < n; ++i) {
    const auto& agent = problem.agent(i);
    Vec xi = x.segment(static_cast<Eigen::Index>(i) * p, p);
    rep.membership = std::max(rep.membership, agent.set.membership_violation(xi));
    Vec g = agent.objective.gradient(xi) + agent.A.transpose() * delta;
    for (int j = 0; j < p; ++j) {
      double lo = agent.set.lower(j);
      double hi = agent.set.upper(j);
      double span = std::max(1.0, std::abs(xi(j)));
      bool at_lo = std::isfinite(lo) && xi(j) - lo <= 1e-9 * span;
      bool at_hi = std::isfinite(hi) && hi - xi(j) <= 1e-9 * span;
      double viol;
      if (at_lo && at_hi)
        viol = 0.0;  // fixed coordinate, any multiplier sign is admissible
      else if (at_lo)
        viol = std::max(0.0, -g(j));
      else if (at_hi)
        viol = std::max(0.0, g(j));
      else
        viol = std::abs(g(j));
      rep.stationarity = std::max(rep.stationarity, viol);
    }
  }
  return rep;
}

}  // namespace dga
