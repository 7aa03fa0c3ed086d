#include "dga/oracle.hpp"

#include <cmath>
#include <limits>

namespace dga {

namespace {
constexpr int kBisections = 200;
constexpr double kBracketCap = 1e13;
}  // namespace

double argmin_scalar(const SeparableObjective& obj, int j, double c, double lo,
                     double hi) {
  auto deriv = [&](double z) { return obj.coord_derivative(j, z) + c; };

  if (std::isfinite(lo) && deriv(lo) >= 0.0) return lo;
  if (std::isfinite(hi) && deriv(hi) <= 0.0) return hi;

  double left, right;
  if (std::isfinite(lo)) {
    left = lo;
  } else {
    left = std::isfinite(hi) ? std::min(0.0, hi) : 0.0;
    double step = 1.0;
    while (deriv(left) > 0.0) {
      left -= step;
      step *= 2.0;
      if (left < -kBracketCap)
        throw std::runtime_error("argmin_scalar: minimizer unbounded below");
    }
  }
  if (std::isfinite(hi)) {
    right = hi;
  } else {
    right = std::isfinite(lo) ? std::max(0.0, lo) : 0.0;
    double step = 1.0;
    while (deriv(right) < 0.0) {
      right += step;
      step *= 2.0;
      if (right > kBracketCap)
        throw std::runtime_error("argmin_scalar: minimizer unbounded above");
    }
  }

  for (int it = 0; it < kBisections && right - left > 0.0; ++it) {
    double mid = 0.5 * (left + right);
    if (mid <= left || mid >= right) break;
    if (deriv(mid) > 0.0)
      right = mid;
    else
      left = mid;
  }
  return 0.5 * (left + right);
}

Vec argmin_linearized(const AgentSpec& agent, const Vec& price) {
  if (!agent.objective.separable_per_coordinate())
    throw std::invalid_argument(
        "argmin_linearized: custom objectives are not supported");
  const int p = agent.objective.dim();
  Vec c = agent.A.transpose() * price;
  Vec z(p);
  for (int j = 0; j < p; ++j)
    z(j) = argmin_scalar(agent.objective, j, c(j), agent.set.lower(j),
                         agent.set.upper(j));
  return z;
}

namespace {

Vec primal_at(const CoupledProblem& problem, const Vec& delta) {
  const int n = problem.num_agents();
  const int p = problem.p();
  Vec x(static_cast<Eigen::Index>(n) * p);
  for (int i = 0; i < n; ++i)
    x.segment(static_cast<Eigen::Index>(i) * p, p) =
        argmin_linearized(problem.agent(i), delta);
  return x;
}

// Dual-function gradient at delta.
Vec dual_gradient(const CoupledProblem& problem, const Vec& delta, Vec& x_out) {
  x_out = primal_at(problem, delta);
  return problem.coupling_residual(x_out);
}

CentralizedSolution solve_scalar_dual(const CoupledProblem& problem, double tol,
                                      double delta0) {
  CentralizedSolution sol;
  Vec delta(1);
  auto residual = [&](double d) {
    delta(0) = d;
    return dual_gradient(problem, delta, sol.x)(0);
  };

  // r is nonincreasing in delta (derivative of a concave dual function).
  double d0 = delta0;
  double r0 = residual(d0);
  ++sol.iterations;
  double lo = d0, hi = d0, rlo = r0, rhi = r0;
  double step = 1.0;
  while (rlo < 0.0) {
    lo -= step;
    step *= 2.0;
    rlo = residual(lo);
    ++sol.iterations;
    if (lo < -kBracketCap && rlo < 0.0)
      throw infeasible_problem_error(
          "solve_centralized: demand below the achievable range");
  }
  step = 1.0;
  while (rhi > 0.0) {
    hi += step;
    step *= 2.0;
    rhi = residual(hi);
    ++sol.iterations;
    if (hi > kBracketCap && rhi > 0.0)
      throw infeasible_problem_error(
          "solve_centralized: demand above the achievable range");
  }

  double r = residual(0.5 * (lo + hi));
  ++sol.iterations;
  for (int it = 0; it < 2000 && std::abs(r) > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (r > 0.0)
      lo = mid;
    else
      hi = mid;
    r = residual(0.5 * (lo + hi));
    ++sol.iterations;
  }
  double final_delta = 0.5 * (lo + hi);
  r = residual(final_delta);
  if (std::abs(r) > tol)
    throw infeasible_problem_error(
        "solve_centralized: dual bisection stalled; demand may be infeasible");
  sol.delta = Vec::Constant(1, final_delta);
  sol.feasibility = std::abs(r);
  return sol;
}

CentralizedSolution solve_vector_dual(const CoupledProblem& problem, double tol,
                                      Vec delta) {
  // Conservative dual Lipschitz estimate: ||stacked A||^2 / mu.
  double a_sq = 0.0;
  double mu_free = std::numeric_limits<double>::infinity();
  for (const auto& agent : problem.agents()) {
    a_sq += std::pow(agent.A.jacobiSvd().singularValues()(0), 2);
    if (agent.set.kind() != FeasibleSet::Kind::fixed_point) {
      Vec lo(problem.p()), hi(problem.p());
      for (int j = 0; j < problem.p(); ++j) {
        lo(j) = agent.set.lower(j);
        hi(j) = agent.set.upper(j);
      }
      mu_free = std::min(mu_free, agent.objective.smoothness_on(lo, hi).second);
    }
  }
  mu_free = std::max(std::isfinite(mu_free) ? mu_free : 0.0, 1e-6);
  const double base_step = mu_free / std::max(a_sq, 1e-12);

  CentralizedSolution sol;
  Vec r = dual_gradient(problem, delta, sol.x);
  ++sol.iterations;
  Vec delta_prev = delta, r_prev = r;
  double step = base_step;
  const long max_iters = 500000;
  for (long it = 0; it < max_iters && r.norm() > tol; ++it) {
    delta_prev = delta;
    r_prev = r;
    delta += step * r;
    r = dual_gradient(problem, delta, sol.x);
    ++sol.iterations;
    // Barzilai-Borwein step for the next ascent move.
    Vec s = delta - delta_prev;
    Vec g = r_prev - r;
    double sg = s.dot(g);
    if (sg > 0.0) {
      step = s.squaredNorm() / sg;
      step = std::clamp(step, 1e-3 * base_step, 1e6 * base_step);
    } else {
      step = base_step;
    }
    if (!delta.allFinite() || delta.norm() > kBracketCap)
      throw infeasible_problem_error(
          "solve_centralized: dual iterates diverged; demand may be infeasible");
  }
  if (r.norm() > tol)
    throw infeasible_problem_error(
        "solve_centralized: dual ascent did not reach the feasibility tolerance");
  sol.delta = delta;
  sol.feasibility = r.norm();
  return sol;
}

}  // namespace

CentralizedSolution solve_centralized(const CoupledProblem& problem, double tol,
                                      std::optional<Vec> delta0) {
  if (tol <= 0.0) throw std::invalid_argument("solve_centralized: tol must be > 0");
  if (problem.m() == 1) {
    double d0 = delta0 && delta0->size() == 1 ? (*delta0)(0) : 0.0;
    return solve_scalar_dual(problem, tol, d0);
  }
  Vec d0 = delta0 && delta0->size() == problem.m() ? *delta0 : Vec::Zero(problem.m());
  return solve_vector_dual(problem, tol, std::move(d0));
}

}  // namespace dga
