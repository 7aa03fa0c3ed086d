#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "dga/analysis.hpp"
#include "dga/oracle.hpp"
#include "dga/scenarios.hpp"
#include "dga/solver.hpp"

using namespace dga;

namespace {

bool bit_equal(const Vec& a, const Vec& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

AgentSpec scalar_agent(double a, double b, double coupling, double demand,
                       FeasibleSet set) {
  return {SeparableObjective{Quadratic{Vec::Constant(1, a), Vec::Constant(1, b)}},
          Mat::Constant(1, 1, coupling), Vec::Constant(1, demand), std::move(set)};
}

}  // namespace

TEST_CASE("default parameters on the two-agent case") {
  auto problem = make_two_agent_analytic().problem;
  auto hp = default_params(problem);
  // l_f = 2, lambda_max(W) = 2, ||A|| = 1:
  // rho = 1, eta = 4, alpha = 0.9 * min{0.5, 8} = 0.45
  CHECK(hp.rho == doctest::Approx(1.0));
  CHECK(hp.eta == doctest::Approx(4.0));
  CHECK(hp.alpha == doctest::Approx(0.45));
  CHECK(validate_params(problem, hp, ValidationLevel::theorem1).ok());

  CHECK_THROWS_AS(default_params(problem, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(default_params(problem, 0.0), std::invalid_argument);
}

TEST_CASE("derived parameters always pass the strong validation level") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto problem = make_random_quadratic(10, 2, 2, seed, seed % 2 == 0);
    CHECK(validate_params(problem, default_params(problem),
                          ValidationLevel::theorem1)
              .ok());
    CHECK(validate_params(problem, linear_rate_params(problem),
                          ValidationLevel::lemma1)
              .ok());
  }
}

TEST_CASE("validation names the violated inequality") {
  auto problem = make_two_agent_analytic().problem;
  auto report = validate_params(problem, {0.6, 4.0, 1.0}, ValidationLevel::lemma1);
  CHECK_FALSE(report.ok());
  bool flagged = false;
  for (const auto& c : report.conditions)
    if (c.name == "alpha < 1/l_f") flagged = !c.pass;
  CHECK(flagged);

  report = validate_params(problem, {0.1, 0.5, 2.0}, ValidationLevel::lemma1);
  CHECK_FALSE(report.ok());
  flagged = false;
  for (const auto& c : report.conditions)
    if (c.name == "rho/eta < 1/lambda_max(W)") flagged = !c.pass;
  CHECK(flagged);
}

TEST_CASE("local updates match hand evaluation") {
  SUBCASE("x step: gradient then clamp") {
    auto agent = scalar_agent(1, 0, 1, 0, FeasibleSet::full_space(1));
    Vec x = Vec::Ones(1), y = Vec::Zero(1);
    CHECK(local_x_update(agent, x, y, 0.25)(0) == doctest::Approx(0.5));

    auto boxed = scalar_agent(1, 0, 1, 0,
                              FeasibleSet::box(Vec::Constant(1, 0.8), Vec::Constant(1, 2.0)));
    CHECK(local_x_update(boxed, x, y, 0.25)(0) == doctest::Approx(0.8));

    // at the unconstrained minimizer with zero price, x is a fixed point
    Vec at_min = Vec::Zero(1);
    CHECK(local_x_update(agent, at_min, y, 0.25)(0) == 0.0);
  }

  SUBCASE("y step") {
    auto agent = scalar_agent(1, 0, 1, 1, FeasibleSet::full_space(1));
    Vec y = Vec::Zero(1), x_new = Vec::Constant(1, 3.0);
    Vec lambda = Vec::Zero(1), t = Vec::Zero(1);
    CHECK(local_y_update(agent, y, x_new, lambda, t, 4.0, 1.0)(0) ==
          doctest::Approx(0.5));
    // A x = d, lambda = 0, t = 0: stationary
    Vec x_bal = Vec::Ones(1);
    CHECK(local_y_update(agent, y, x_bal, lambda, t, 4.0, 1.0)(0) == 0.0);
  }

  SUBCASE("lambda step") {
    CHECK(local_lambda_update(Vec::Ones(1), Vec::Constant(1, 2.0), 0.5)(0) == 0.0);
    CHECK(local_lambda_update(Vec::Ones(1), Vec::Zero(1), 0.5)(0) == 1.0);
  }
}

TEST_CASE("initialization") {
  auto problem = make_dispatch118(10);
  auto state = init(problem);
  CHECK(state.round == 0);
  CHECK(state.lambda.cwiseAbs().maxCoeff() == 0.0);
  CHECK(state.t.cwiseAbs().maxCoeff() == 0.0);  // y0 = 0 is consensual
  int pinned_at_zero = 0;
  for (int i = 0; i < problem.num_agents(); ++i)
    if (problem.agent(i).set.kind() == FeasibleSet::Kind::fixed_point)
      pinned_at_zero += state.x(i) == 0.0;
  CHECK(pinned_at_zero == 104);

  CHECK_THROWS_AS(init(problem, Vec::Zero(5)), std::invalid_argument);
}

TEST_CASE("oracle fixed point is invariant under one round") {
  auto problem = make_two_agent_analytic().problem;
  auto hp = default_params(problem);
  auto sol = solve_centralized(problem, 1e-12);
  auto star = fixed_point_state(problem, sol);

  SystemState advanced = star;
  step(advanced, problem, hp);
  double dh = (advanced.x - star.x).norm() + (advanced.y - star.y).norm() +
              (advanced.lambda - star.lambda).norm();
  CHECK(dh <= 1e-9);
}

TEST_CASE("stepping is pure and scheduling-independent") {
  auto problem = make_random_quadratic(10, 2, 2, 5, true);
  auto hp = default_params(problem);

  auto seq = init(problem);
  auto par = seq;
  StepOptions serial, parallel;
  parallel.threads = 4;
  for (int k = 0; k < 50; ++k) {
    step(seq, problem, hp, serial);
    step(par, problem, hp, parallel);
  }
  CHECK(bit_equal(seq.x, par.x));
  CHECK(bit_equal(seq.y, par.y));
  CHECK(bit_equal(seq.lambda, par.lambda));
  CHECK(bit_equal(seq.t, par.t));

  // two fresh rounds from a copied state replay identically
  auto replay = init(problem);
  step(replay, problem, hp);
  step(replay, problem, hp);
  auto once = init(problem);
  step(once, problem, hp);
  step(once, problem, hp);
  CHECK(bit_equal(replay.x, once.x));
}

TEST_CASE("agentwise round equals the stacked dense update") {
  auto problem = make_random_quadratic(8, 2, 2, 9, false);
  auto hp = default_params(problem);
  const int n = 8, p = 2, m = 2;
  Mat L = problem.graph().laplacian();

  auto state = init(problem);
  for (int warm = 0; warm < 3; ++warm) step(state, problem, hp);

  // dense reference for one round on stacked vectors
  Vec x_next(n * p), y_next(n * m);
  for (int i = 0; i < n; ++i) {
    const auto& agent = problem.agent(i);
    Vec xi = state.x.segment(i * p, p);
    Vec yi = state.y.segment(i * m, m);
    x_next.segment(i * p, p) =
        xi - hp.alpha * (agent.objective.gradient(xi) + agent.A.transpose() * yi);
    y_next.segment(i * m, m) =
        yi - (1.0 / hp.eta) * (-agent.A * x_next.segment(i * p, p) + agent.d -
                               state.lambda.segment(i * m, m) +
                               hp.rho * state.t.segment(i * m, m));
  }
  Vec t_next = apply_block_operator(L, y_next, m);
  Vec lambda_next = state.lambda - hp.rho * t_next;

  step(state, problem, hp);
  CHECK((state.x - x_next).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((state.y - y_next).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((state.t - t_next).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((state.lambda - lambda_next).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lambda column sums are conserved at zero") {
  auto problem = make_random_quadratic(10, 2, 2, 4, true);
  auto hp = default_params(problem);
  StopCriteria stop;
  stop.max_rounds = 1000;
  stop.feasibility_tol = 0.0;
  stop.step_tol = 0.0;
  auto result = run(problem, hp, stop);
  CHECK(result.state.lambda_column_sums(2).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("run bookkeeping") {
  auto problem = make_two_agent_analytic().problem;
  auto hp = default_params(problem);

  SUBCASE("zero budget leaves only the initialization row") {
    StopCriteria stop;
    stop.max_rounds = 0;
    auto result = run(problem, hp, stop);
    CHECK(result.trace.rows.size() == 1);
    CHECK(result.status == RunStatus::budget_exhausted);
  }

  SUBCASE("convergence on the analytic case") {
    StopCriteria stop;
    auto result = run(problem, hp, stop);
    CHECK(result.status == RunStatus::converged);
    CHECK(result.trace.back().feas_sq <= 1e-16);
    CHECK(std::abs(result.state.x(0) - 0.5) <= 1e-8);
    CHECK(result.trace.rounds() + 1 == static_cast<long>(result.trace.rows.size()));
  }

  SUBCASE("divergence guard") {
    StopCriteria stop;
    stop.max_rounds = 100000;
    auto result = run(problem, {2.0, 0.05, 1.0}, stop);  // far outside validity
    CHECK(result.status == RunStatus::diverged);
  }
}

TEST_CASE("exact-argmin variant") {
  auto fixture = make_two_agent_analytic();
  auto hp = default_params(fixture.problem);
  StopCriteria stop;
  RunOptions opts;
  opts.variant = Variant::exact_mm;
  auto result = run(fixture.problem, hp, stop, opts);
  CHECK(result.status == RunStatus::converged);
  CHECK((result.state.x - fixture.x_star).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("literal-lambda variant differs exactly when rho != 1") {
  auto problem = make_two_agent_analytic().problem;
  auto hp = default_params(problem);

  auto a = init(problem), b = a;
  StepOptions eq8c, literal;
  literal.variant = Variant::dga_algorithm1_literal;
  for (int k = 0; k < 5; ++k) {
    step(a, problem, hp, eq8c);
    step(b, problem, hp, literal);
  }
  CHECK(bit_equal(a.lambda, b.lambda));  // rho = 1: the variants coincide

  Hyperparameters hp2{hp.alpha, hp.eta, 0.5};
  auto c = init(problem), d = c;
  for (int k = 0; k < 5; ++k) {
    step(c, problem, hp2, eq8c);
    step(d, problem, hp2, literal);
  }
  CHECK_FALSE(bit_equal(c.lambda, d.lambda));
}

TEST_CASE("variant names round-trip") {
  for (auto v : {Variant::dga, Variant::exact_mm, Variant::dga_algorithm1_literal})
    CHECK(variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(variant_from_string("nope"), std::invalid_argument);
}
