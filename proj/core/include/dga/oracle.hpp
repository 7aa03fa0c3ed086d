#pragma once

#include <optional>

#include "dga/problem.hpp"

namespace dga {

class infeasible_problem_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// argmin over [lo, hi] of f_j(z) + c*z, by bisection on the stationarity
/// condition f_j'(z) + c = 0. Infinite bounds are handled by doubling the
/// bracket before bisecting; 200 halvings.
double argmin_scalar(const SeparableObjective& obj, int j, double c, double lo,
                     double hi);

/// argmin_{z in X_i} f_i(z) + <A_i z, price>, solved per coordinate.
/// Requires a per-coordinate separable objective.
Vec argmin_linearized(const AgentSpec& agent, const Vec& price);

struct CentralizedSolution {
  Vec x;            // stacked n*p primal optimum
  Vec delta;        // m multiplier of sum A_i x_i = sum d_i
  double feasibility = 0.0;
  long iterations = 0;
};

/// Dual ascent on the coupled constraint's multiplier: scalar bisection for
/// m = 1, Barzilai-Borwein gradient ascent otherwise. Inner minimizations
/// go through argmin_linearized. Throws infeasible_problem_error when the
/// total demand is outside the achievable range.
CentralizedSolution solve_centralized(const CoupledProblem& problem, double tol,
                                      std::optional<Vec> delta0 = std::nullopt);

}  // namespace dga
