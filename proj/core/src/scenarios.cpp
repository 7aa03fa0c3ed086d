#include "dga/scenarios.hpp"

#include <algorithm>
#include <numeric>

namespace dga {

CoupledProblem make_dispatch118(std::uint64_t seed) {
  constexpr int n = 118;
  constexpr int n_gen = 14;
  constexpr double demand = 950.0;

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 116; ++i) {  // 1-based (i, i+1) and (i, i+2), i <= 116
    edges.push_back({i, i + 1});
    edges.push_back({i, i + 2});
  }
  auto graph = NetworkGraph::with_metropolis_weights(n, edges);

  UniformRng rng(seed);
  std::vector<int> buses(n);
  std::iota(buses.begin(), buses.end(), 0);
  for (int k = 0; k < n_gen; ++k)
    std::swap(buses[static_cast<std::size_t>(k)],
              buses[static_cast<std::size_t>(rng.uniform_int(k, n - 1))]);
  std::vector<int> generators(buses.begin(), buses.begin() + n_gen);
  std::sort(generators.begin(), generators.end());

  std::vector<AgentSpec> agents;
  agents.reserve(n);
  std::size_t g = 0;
  for (int i = 0; i < n; ++i) {
    bool is_gen = g < generators.size() && generators[g] == i;
    if (is_gen) {
      ++g;
      QuadExp cost{Vec::Constant(1, rng.uniform(0.3, 0.7)),
                   Vec::Constant(1, rng.uniform(100.0, 400.0)),
                   Vec::Constant(1, rng.uniform(1.0, 10.0) * 1e-4),
                   Vec::Constant(1, rng.uniform(1.0, 10.0) * 1e-2)};
      agents.push_back({SeparableObjective(std::move(cost)), Mat::Ones(1, 1),
                        Vec::Constant(1, demand / n_gen),
                        FeasibleSet::box(Vec::Zero(1), Vec::Constant(1, 250.0))});
    } else {
      agents.push_back({SeparableObjective(Quadratic{Vec::Zero(1), Vec::Zero(1)}),
                        Mat::Ones(1, 1), Vec::Zero(1),
                        FeasibleSet::fixed(Vec::Zero(1))});
    }
  }
  return CoupledProblem(std::move(agents), std::move(graph), 1, 1);
}

CoupledProblem make_random_quadratic(int n, int p, int m, std::uint64_t seed,
                                     bool box) {
  if (n < 3) throw std::invalid_argument("make_random_quadratic: need n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  if (n > 4)
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 2) % n});
  auto graph = NetworkGraph::with_metropolis_weights(n, edges);

  UniformRng rng(seed);
  std::vector<Vec> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  std::vector<Mat> A(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i)].resize(p);
    b[static_cast<std::size_t>(i)].resize(p);
    for (int j = 0; j < p; ++j) a[static_cast<std::size_t>(i)](j) = rng.uniform(0.5, 2.0);
    for (int j = 0; j < p; ++j) b[static_cast<std::size_t>(i)](j) = rng.uniform(-1.0, 1.0);
    A[static_cast<std::size_t>(i)].resize(m, p);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < p; ++c)
        A[static_cast<std::size_t>(i)](r, c) = rng.uniform(-1.0, 1.0);
  }
  Vec interior(static_cast<Eigen::Index>(n) * p);
  for (Eigen::Index k = 0; k < interior.size(); ++k)
    interior(k) = rng.uniform(-1.0, 1.0);

  std::vector<AgentSpec> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec xi = interior.segment(static_cast<Eigen::Index>(i) * p, p);
    Vec d = A[static_cast<std::size_t>(i)] * xi;  // the interior point is feasible
    FeasibleSet set = FeasibleSet::full_space(p);
    if (box) {
      Vec margin(p);
      for (int j = 0; j < p; ++j) margin(j) = rng.uniform(1.0, 3.0);
      set = FeasibleSet::box(xi - margin, xi + margin);
    }
    agents.push_back({SeparableObjective(Quadratic{a[static_cast<std::size_t>(i)],
                                                   b[static_cast<std::size_t>(i)]}),
                      A[static_cast<std::size_t>(i)], std::move(d), std::move(set)});
  }
  return CoupledProblem(std::move(agents), std::move(graph), m, p);
}

TwoAgentAnalytic make_two_agent_analytic() {
  NetworkGraph graph(2, {{0, 1, 1.0}});
  std::vector<AgentSpec> agents;
  // f_1 = u^2; f_2 = (u-1)^2 modulo a constant.
  agents.push_back({SeparableObjective(Quadratic{Vec::Ones(1), Vec::Zero(1)}),
                    Mat::Ones(1, 1), Vec::Ones(1), FeasibleSet::full_space(1)});
  agents.push_back({SeparableObjective(Quadratic{Vec::Ones(1), Vec::Constant(1, -2.0)}),
                    Mat::Ones(1, 1), Vec::Ones(1), FeasibleSet::full_space(1)});
  TwoAgentAnalytic out{CoupledProblem(std::move(agents), std::move(graph), 1, 1),
                       Vec(2), Vec(1)};
  out.x_star << 0.5, 1.5;
  out.delta_star << -1.0;
  return out;
}

}  // namespace dga
