#include <doctest.h>

#include "dga/problem.hpp"
#include "dga/scenarios.hpp"

using namespace dga;

namespace {

AgentSpec quadratic_agent(double a, double b, double coupling, double demand) {
  return {SeparableObjective{Quadratic{Vec::Constant(1, a), Vec::Constant(1, b)}},
          Mat::Constant(1, 1, coupling), Vec::Constant(1, demand),
          FeasibleSet::full_space(1)};
}

NetworkGraph pair_graph() { return NetworkGraph(2, {{0, 1, 1.0}}); }

}  // namespace

TEST_CASE("construction validates shapes and coupling") {
  std::vector<AgentSpec> agents;
  agents.push_back(quadratic_agent(1, 0, 1, 1));
  agents.push_back(quadratic_agent(2, 1, -1, 0));
  CHECK_NOTHROW(CoupledProblem(agents, pair_graph(), 1, 1));

  SUBCASE("graph size mismatch") {
    CHECK_THROWS_AS(
        CoupledProblem(agents, NetworkGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}}), 1, 1),
        std::invalid_argument);
  }
  SUBCASE("m > n*p") {
    std::vector<AgentSpec> wide;
    for (int i = 0; i < 2; ++i)
      wide.push_back({SeparableObjective{Quadratic{Vec::Ones(1), Vec::Zero(1)}},
                      Mat::Ones(3, 1), Vec::Zero(3), FeasibleSet::full_space(1)});
    CHECK_THROWS_AS(CoupledProblem(wide, pair_graph(), 3, 1), std::invalid_argument);
  }
  SUBCASE("all-zero coupling rejected") {
    std::vector<AgentSpec> zero;
    zero.push_back(quadratic_agent(1, 0, 0, 0));
    zero.push_back(quadratic_agent(1, 0, 0, 0));
    CHECK_THROWS_AS(CoupledProblem(zero, pair_graph(), 1, 1), std::invalid_argument);
  }
}

TEST_CASE("aggregate constants") {
  std::vector<AgentSpec> agents;
  agents.push_back(quadratic_agent(1, 0, 2, 1));    // l_f = mu = 2, ||A|| = 2
  agents.push_back(quadratic_agent(3, 1, -0.5, 2)); // l_f = mu = 6
  CoupledProblem problem(agents, pair_graph(), 1, 1);

  auto [l_f, mu] = problem.smoothness_bounds();
  CHECK(l_f == doctest::Approx(6.0));
  CHECK(mu == doctest::Approx(2.0));
  CHECK(problem.coupling_norm() == doctest::Approx(2.0));
  CHECK(problem.sum_d()(0) == doctest::Approx(3.0));
}

TEST_CASE("coupling residual") {
  std::vector<AgentSpec> agents;
  agents.push_back(quadratic_agent(1, 0, 1, 0.5));
  agents.push_back(quadratic_agent(1, 0, 1, 1.5));
  CoupledProblem problem(agents, pair_graph(), 1, 1);

  Vec x(2);
  x << 0.5, 1.5;  // A = I blockwise, x = d
  CHECK(problem.coupling_residual(x).cwiseAbs().maxCoeff() == 0.0);
  x << 1.0, 2.0;
  CHECK(problem.coupling_residual(x)(0) == doctest::Approx(1.0));
}

TEST_CASE("kkt_check on the analytic two-agent optimum") {
  auto fixture = make_two_agent_analytic();
  auto rep = kkt_check(fixture.problem, fixture.x_star, fixture.delta_star);
  CHECK(rep.feasibility == 0.0);
  CHECK(rep.stationarity == 0.0);
  CHECK(rep.membership == 0.0);
  CHECK(rep.max_residual() == 0.0);

  // moving one coordinate breaks both feasibility and stationarity
  Vec x = fixture.x_star;
  x(0) += 0.1;
  auto bad = kkt_check(fixture.problem, x, fixture.delta_star);
  CHECK(bad.feasibility == doctest::Approx(0.1));
  CHECK(bad.stationarity == doctest::Approx(0.2));
}

TEST_CASE("kkt_check respects normal cones at bounds") {
  // minimizer of u^2 + 4u on [0, 1] sits at the lower bound with positive
  // reduced gradient; that is stationary for the box
  std::vector<AgentSpec> agents;
  agents.push_back({SeparableObjective{Quadratic{Vec::Ones(1), Vec::Constant(1, 4.0)}},
                    Mat::Ones(1, 1), Vec::Zero(1),
                    FeasibleSet::box(Vec::Zero(1), Vec::Ones(1))});
  agents.push_back({SeparableObjective{Quadratic{Vec::Ones(1), Vec::Zero(1)}},
                    Mat::Ones(1, 1), Vec::Zero(1), FeasibleSet::full_space(1)});
  CoupledProblem problem(agents, pair_graph(), 1, 1);

  Vec x(2);
  x << 0.0, 0.0;
  Vec delta = Vec::Zero(1);
  auto rep = kkt_check(problem, x, delta);
  CHECK(rep.stationarity == 0.0);  // +4 at the lower bound is admissible

  // a fixed coordinate never contributes stationarity error
  std::vector<AgentSpec> pinned;
  pinned.push_back({SeparableObjective{Quadratic{Vec::Ones(1), Vec::Constant(1, 7.0)}},
                    Mat::Ones(1, 1), Vec::Zero(1), FeasibleSet::fixed(Vec::Zero(1))});
  pinned.push_back({SeparableObjective{Quadratic{Vec::Ones(1), Vec::Zero(1)}},
                    Mat::Ones(1, 1), Vec::Zero(1), FeasibleSet::full_space(1)});
  CoupledProblem pp(pinned, pair_graph(), 1, 1);
  auto rep2 = kkt_check(pp, x, delta);
  CHECK(rep2.stationarity == 0.0);
}
