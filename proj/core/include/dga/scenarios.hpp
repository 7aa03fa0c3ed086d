#pragma once

#include <cstdint>
#include <random>

#include "dga/problem.hpp"

namespace dga {

/// Portable uniform draws on top of mt19937_64: the raw 64-bit stream is
/// mapped to [0,1) with a fixed 53-bit ladder, so identical seeds yield
/// identical instances on every platform.
class UniformRng {
public:
  explicit UniformRng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) {
    double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform(0.0, 1.0) * (hi - lo + 1));
  }

private:
  std::mt19937_64 eng_;
};

/// 118-bus economic dispatch: path edges (i, i+1) and (i, i+2) for the
/// first 116 buses (1-based), Metropolis weights, 14 seeded-random
/// generator buses with quadratic-plus-exponential cost on [0, 250], all
/// other buses pinned at 0. Total demand 950, split evenly over the
/// generator buses as virtual local demand.
/// Draw order: generator buses (partial Fisher-Yates over 0..117), then
/// per generator in ascending bus order: a, b, delta, ell.
CoupledProblem make_dispatch118(std::uint64_t seed);

/// Random strongly convex quadratics on a ring-plus-chord graph.
/// box = false yields full-space sets (the linear-rate regime).
/// Draw order: per agent: a (p), b (p), A (row-major m*p); then the
/// feasible interior point (n*p); then for box = true per agent margins (p).
CoupledProblem make_random_quadratic(int n, int p, int m, std::uint64_t seed,
                                     bool box);

struct TwoAgentAnalytic {
  CoupledProblem problem;
  Vec x_star;      // (0.5, 1.5)
  Vec delta_star;  // (-1)
};

/// n=2, f_1 = u^2, f_2 = (u-1)^2, A_i = 1, total demand 2, full space.
TwoAgentAnalytic make_two_agent_analytic();

}  // namespace dga
