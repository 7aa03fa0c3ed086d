#include "dga/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "dga/oracle.hpp"
#include "dga/parallel.hpp"

namespace dga {

bool ValidationReport::ok() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& c : conditions)
    out << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " (margin " << c.margin
        << ")\n";
  return out.str();
}

ValidationReport validate_params(const CoupledProblem& problem,
                                 const Hyperparameters& hp,
                                 ValidationLevel level) {
  ValidationReport report;
  auto add = [&](std::string name, double margin) {
    report.conditions.push_back({std::move(name), margin, margin > 0.0});
  };

  add("alpha > 0", hp.alpha);
  add("eta > 0", hp.eta);
  add("rho > 0", hp.rho);

  auto [l2, lmax] = spectral_extremes(problem.graph().laplacian());
  (void)l2;
  auto [l_f, mu] = problem.smoothness_bounds();
  (void)mu;

  // Lemma 1: rho/eta < 1/lambda_max(W) and alpha < 1/l_f.
  add("rho/eta < 1/lambda_max(W)", 1.0 / lmax - hp.rho / hp.eta);
  add("alpha < 1/l_f", 1.0 / l_f - hp.alpha);

  if (level == ValidationLevel::theorem1) {
    // lambda_min(eta I - rho W) = eta - rho lambda_max(W) since W is PSD.
    double a_norm_sq = std::pow(problem.coupling_norm(), 2);
    double bound = 4.0 * (hp.eta - hp.rho * lmax) / a_norm_sq;
    add("alpha < 4(eta - rho lambda_max(W))/||A||^2", bound - hp.alpha);
  }
  return report;
}

Hyperparameters default_params(const CoupledProblem& problem, double safety) {
  if (safety <= 0.0 || safety >= 1.0)
    throw std::invalid_argument(
        "default_params: safety must lie strictly inside (0, 1)");
  auto [l2, lmax] = spectral_extremes(problem.graph().laplacian());
  (void)l2;
  auto [l_f, mu] = problem.smoothness_bounds();
  (void)mu;
  if (!(l_f > 0.0) || !std::isfinite(l_f))
    throw std::invalid_argument("default_params: smoothness constant not certifiable");

  Hyperparameters hp;
  hp.rho = 1.0;
  hp.eta = 2.0 * hp.rho * lmax;
  double a_norm_sq = std::pow(problem.coupling_norm(), 2);
  hp.alpha = safety * std::min(1.0 / l_f,
                               4.0 * (hp.eta - hp.rho * lmax) / a_norm_sq);
  return hp;
}

Hyperparameters linear_rate_params(const CoupledProblem& problem, double safety) {
  if (safety <= 0.0 || safety >= 1.0)
    throw std::invalid_argument(
        "linear_rate_params: safety must lie strictly inside (0, 1)");
  auto [l2, lmax] = spectral_extremes(problem.graph().laplacian());
  (void)l2;
  auto [l_f, mu] = problem.smoothness_bounds();
  if (!(mu > 0.0))
    throw std::invalid_argument("linear_rate_params: needs a strongly convex problem");

  Hyperparameters hp;
  hp.rho = 1.0;
  hp.alpha = safety / l_f;  // < 1/l_f <= 2/(l_f + mu)
  double a_norm_sq = std::pow(problem.coupling_norm(), 2);
  const double theta1 = 0.45, theta2 = 0.45;
  // theta0 = 1/alpha, so 2/(l_f+mu) - 1/theta0 = 2/(l_f+mu) - alpha > 0.
  double lower1 = hp.alpha * a_norm_sq / ((2.0 / (l_f + mu) - hp.alpha) * theta2);
  double lower2 = (l_f + mu) / (2.0 * mu * l_f * hp.alpha) *
                  (hp.rho * a_norm_sq * lmax + a_norm_sq / theta1);
  double lower3 = 2.0 * hp.rho * lmax;  // keep the Lemma-1 margin as well
  hp.eta = 1.05 * std::max({lower1, lower2, lower3});
  return hp;
}

Vec SystemState::lambda_column_sums(int m) const {
  Vec s = Vec::Zero(m);
  for (Eigen::Index i = 0; i * m < lambda.size(); ++i)
    s += lambda.segment(i * m, m);
  return s;
}

double SystemState::norm() const {
  return std::sqrt(x.squaredNorm() + y.squaredNorm() + lambda.squaredNorm());
}

SystemState init(const CoupledProblem& problem, std::optional<Vec> x0,
                 std::optional<Vec> y0) {
  const int n = problem.num_agents();
  const int p = problem.p();
  const int m = problem.m();
  SystemState s;
  if (x0) {
    if (x0->size() != static_cast<Eigen::Index>(n) * p)
      throw std::invalid_argument("init: x0 dimension mismatch");
    s.x = *x0;
  } else {
    s.x.resize(static_cast<Eigen::Index>(n) * p);
    for (int i = 0; i < n; ++i)
      s.x.segment(static_cast<Eigen::Index>(i) * p, p) =
          problem.agent(i).set.project(Vec::Zero(p));
  }
  if (y0) {
    if (y0->size() != static_cast<Eigen::Index>(n) * m)
      throw std::invalid_argument("init: y0 dimension mismatch");
    s.y = *y0;
  } else {
    s.y = Vec::Zero(static_cast<Eigen::Index>(n) * m);
  }
  // lambda^0 = 0 blockwise satisfies the zero-column-sum condition.
  s.lambda = Vec::Zero(static_cast<Eigen::Index>(n) * m);
  s.t = exchange(problem.graph(), s.y, m).second;
  s.round = 0;
  return s;
}

Variant variant_from_string(const std::string& name) {
  if (name == "dga") return Variant::dga;
  if (name == "exact_mm") return Variant::exact_mm;
  if (name == "dga_algorithm1_literal") return Variant::dga_algorithm1_literal;
  throw std::invalid_argument("unknown variant: " + name);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::dga: return "dga";
    case Variant::exact_mm: return "exact_mm";
    case Variant::dga_algorithm1_literal: return "dga_algorithm1_literal";
  }
  return "?";
}

Vec local_x_update(const AgentSpec& agent, const Vec& x_i, const Vec& y_i,
                   double alpha) {
  return agent.set.project(
      x_i - alpha * (agent.objective.gradient(x_i) + agent.A.transpose() * y_i));
}

Vec local_y_update(const AgentSpec& agent, const Vec& y_i, const Vec& x_i_new,
                   const Vec& lambda_i, const Vec& t_i, double eta, double rho) {
  return y_i - (1.0 / eta) * (-agent.A * x_i_new + agent.d - lambda_i + rho * t_i);
}

Vec local_lambda_update(const Vec& lambda_i, const Vec& t_i_new, double rho) {
  return lambda_i - rho * t_i_new;
}

void step(SystemState& state, const CoupledProblem& problem,
          const Hyperparameters& hp, const StepOptions& opts) {
  const int n = problem.num_agents();
  const int p = problem.p();
  const int m = problem.m();

  // x-phase (round-k data only).
  Vec x_new(state.x.size());
  if (opts.variant == Variant::exact_mm) {
    parallel_for(n, opts.threads, [&](int i) {
      x_new.segment(static_cast<Eigen::Index>(i) * p, p) = argmin_linearized(
          problem.agent(i), state.y.segment(static_cast<Eigen::Index>(i) * m, m));
    });
  } else {
    parallel_for(n, opts.threads, [&](int i) {
      x_new.segment(static_cast<Eigen::Index>(i) * p, p) = local_x_update(
          problem.agent(i), state.x.segment(static_cast<Eigen::Index>(i) * p, p),
          state.y.segment(static_cast<Eigen::Index>(i) * m, m), hp.alpha);
    });
  }

  // y-phase (uses the cached round-k aggregate t).
  Vec y_new(state.y.size());
  parallel_for(n, opts.threads, [&](int i) {
    y_new.segment(static_cast<Eigen::Index>(i) * m, m) = local_y_update(
        problem.agent(i), state.y.segment(static_cast<Eigen::Index>(i) * m, m),
        x_new.segment(static_cast<Eigen::Index>(i) * p, p),
        state.lambda.segment(static_cast<Eigen::Index>(i) * m, m),
        state.t.segment(static_cast<Eigen::Index>(i) * m, m), hp.eta, hp.rho);
  });

  // Single y-exchange per round.
  auto [mailbox, t_new] = exchange(problem.graph(), y_new, m);
  if (opts.on_exchange) opts.on_exchange(state.round, mailbox);

  // lambda-phase. Algorithm-1-literal mode drops the rho factor.
  double lam_rho = opts.variant == Variant::dga_algorithm1_literal ? 1.0 : hp.rho;
  Vec lambda_new(state.lambda.size());
  parallel_for(n, opts.threads, [&](int i) {
    lambda_new.segment(static_cast<Eigen::Index>(i) * m, m) = local_lambda_update(
        state.lambda.segment(static_cast<Eigen::Index>(i) * m, m),
        t_new.segment(static_cast<Eigen::Index>(i) * m, m), lam_rho);
  });

  state.x = std::move(x_new);
  state.y = std::move(y_new);
  state.lambda = std::move(lambda_new);
  state.t = std::move(t_new);
  ++state.round;
}

RunResult run(const CoupledProblem& problem, const Hyperparameters& hp,
              const StopCriteria& stop, const RunOptions& opts) {
  if (stop.max_rounds < 0)
    throw std::invalid_argument("run: max_rounds must be >= 0");
  const int m = problem.m();

  RunResult result;
  result.state = init(problem);
  SystemState& state = result.state;

  auto make_row = [&](const SystemState& prev, const SystemState& cur,
                      double wall_s) {
    TraceRow row;
    row.round = cur.round;
    row.feas_sq = problem.coupling_residual(cur.x).squaredNorm();
    row.opt_sq = cur.round == 0 ? 0.0 : (cur.x - prev.x).squaredNorm();
    row.consensus_sq = cur.y.dot(cur.t);  // y^T W y via the cached aggregate
    if (opts.reference_x)
      row.dist_sq = (cur.x - *opts.reference_x).squaredNorm();
    row.wall_time_s = wall_s;
    if (opts.per_round && cur.round > 0) opts.per_round(prev, cur, row);
    return row;
  };

  result.trace.rows.push_back(make_row(state, state, 0.0));
  if (opts.record_snapshots) result.snapshots.push_back(state);

  StepOptions step_opts;
  step_opts.variant = opts.variant;
  step_opts.threads = opts.threads;
  step_opts.on_exchange = opts.on_exchange;

  result.status = RunStatus::budget_exhausted;
  SystemState prev = state;
  for (long k = 0; k < stop.max_rounds; ++k) {
    prev = state;
    auto t0 = std::chrono::steady_clock::now();
    step(state, problem, hp, step_opts);
    auto t1 = std::chrono::steady_clock::now();
    double wall = std::chrono::duration<double>(t1 - t0).count();

    result.trace.rows.push_back(make_row(prev, state, wall));
    if (opts.record_snapshots) result.snapshots.push_back(state);

    if (state.norm() > 1e12) {
      result.status = RunStatus::diverged;
      break;
    }
    double feas = std::sqrt(result.trace.back().feas_sq);
    double step_res = std::sqrt(result.trace.back().opt_sq) / hp.alpha;
    if (feas <= stop.feasibility_tol && step_res <= stop.step_tol) {
      result.status = RunStatus::converged;
      break;
    }
  }
  (void)m;
  return result;
}

LocalityReport audit_locality(const CoupledProblem& problem,
                              const Hyperparameters& hp, long rounds,
                              std::uint64_t seed, Variant variant) {
  const int n = problem.num_agents();
  const int p = problem.p();
  const int m = problem.m();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-1e3, 1e3);

  LocalityReport report;
  report.messages_per_round = 2 * problem.graph().edges().size();

  StepOptions step_opts;
  step_opts.variant = variant;

  SystemState state = init(problem);
  for (long k = 0; k < rounds; ++k) {
    SystemState reference = state;
    step(reference, problem, hp, step_opts);

    for (int probe = 0; probe < n; ++probe) {
      SystemState perturbed = state;
      std::vector<bool> keep(static_cast<std::size_t>(n), false);
      keep[static_cast<std::size_t>(probe)] = true;
      for (const auto& [j, w] : problem.graph().neighbors(probe))
        keep[static_cast<std::size_t>(j)] = true;
      for (int i = 0; i < n; ++i) {
        if (keep[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < p; ++j)
          perturbed.x(static_cast<Eigen::Index>(i) * p + j) = noise(rng);
        for (int j = 0; j < m; ++j) {
          perturbed.y(static_cast<Eigen::Index>(i) * m + j) = noise(rng);
          perturbed.lambda(static_cast<Eigen::Index>(i) * m + j) = noise(rng);
          perturbed.t(static_cast<Eigen::Index>(i) * m + j) = noise(rng);
        }
      }
      step(perturbed, problem, hp, step_opts);

      auto bit_identical = [](const Vec& a, const Vec& b, Eigen::Index off,
                              Eigen::Index len) {
        return std::memcmp(a.data() + off, b.data() + off,
                           static_cast<std::size_t>(len) * sizeof(double)) == 0;
      };
      bool same =
          bit_identical(perturbed.x, reference.x,
                        static_cast<Eigen::Index>(probe) * p, p) &&
          bit_identical(perturbed.y, reference.y,
                        static_cast<Eigen::Index>(probe) * m, m) &&
          bit_identical(perturbed.lambda, reference.lambda,
                        static_cast<Eigen::Index>(probe) * m, m) &&
          bit_identical(perturbed.t, reference.t,
                        static_cast<Eigen::Index>(probe) * m, m);
      if (!same) {
        report.violations.push_back(
            {k, probe, -1,
             "agent state depends on non-neighbor information"});
      }
    }
    state = reference;
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace dga
