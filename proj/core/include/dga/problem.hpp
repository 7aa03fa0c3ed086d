#pragma once

#include <utility>
#include <vector>

#include "dga/graph.hpp"
#include "dga/objective.hpp"

namespace dga {

struct AgentSpec {
  SeparableObjective objective;  // over R^p
  Mat A;                         // m x p
  Vec d;                         // m
  FeasibleSet set;               // subset of R^p
};

/// Problem (n agents, graph, coupled constraint sum_i A_i x_i = sum_i d_i).
class CoupledProblem {
public:
  CoupledProblem(std::vector<AgentSpec> agents, NetworkGraph graph, int m, int p);

  int num_agents() const { return static_cast<int>(agents_.size()); }
  int m() const { return m_; }
  int p() const { return p_; }
  const AgentSpec& agent(int i) const { return agents_.at(static_cast<std::size_t>(i)); }
  const std::vector<AgentSpec>& agents() const { return agents_; }
  const NetworkGraph& graph() const { return graph_; }

  /// (max_i l_f(i), min_i mu(i)), certified over each agent's feasible box.
  std::pair<double, double> smoothness_bounds() const { return {l_f_, mu_}; }

  /// max_i ||A_i||_2 = spectral norm of the block-diagonal coupling matrix.
  double coupling_norm() const { return coupling_norm_; }

  /// sum_i A_i x_i - sum_i d_i for a stacked x of size n*p.
  Vec coupling_residual(const Vec& x) const;

  Vec sum_d() const;

private:
  std::vector<AgentSpec> agents_;
  NetworkGraph graph_;
  int m_, p_;
  double l_f_, mu_, coupling_norm_;
};

struct KktReport {
  double feasibility = 0.0;    // ||sum A_i x_i - sum d_i||
  double stationarity = 0.0;   // max normal-cone violation over coordinates
  double membership = 0.0;     // max distance of any x_i from X_i
  double max_residual() const;
};

/// Checks x (stacked, n*p) and the multiplier delta (m) against the KKT
/// conditions. Box stationarity: at a lower bound (grad f + A^T delta)_j
/// must be >= 0, at an upper bound <= 0, and zero on interior coordinates.
KktReport kkt_check(const CoupledProblem& problem, const Vec& x, const Vec& delta);

}  // namespace dga
