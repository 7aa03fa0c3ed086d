#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dga/harness.hpp"
#include "dga/problem.hpp"
#include "dga/trace.hpp"

namespace dga {

struct Hyperparameters {
  double alpha = 0.0;  // primal step size
  double eta = 0.0;    // dual step denominator
  double rho = 0.0;    // penalty
};

enum class ValidationLevel { lemma1, theorem1 };

struct ConditionCheck {
  std::string name;
  double margin = 0.0;  // > 0 means the strict inequality holds
  bool pass = false;
};

struct ValidationReport {
  std::vector<ConditionCheck> conditions;
  bool ok() const;
  std::string summary() const;
};

ValidationReport validate_params(const CoupledProblem& problem,
                                 const Hyperparameters& hp, ValidationLevel level);

/// rho = 1, eta = 2 rho lambda_max(W),
/// alpha = safety * min{1/l_f, 4(eta - rho lambda_max)/||A||^2}.
/// safety must lie strictly inside (0, 1); the result passes
/// validate_params at theorem1 level.
Hyperparameters default_params(const CoupledProblem& problem, double safety = 0.9);

/// Parameters sized for the linear-rate regime (full-space, strongly
/// convex): alpha = safety/l_f and eta scaled above both strong-convexity
/// lower bounds with the auxiliary scalars fixed at theta0 = 1/alpha,
/// theta1 = theta2 = 0.45.
Hyperparameters linear_rate_params(const CoupledProblem& problem,
                                   double safety = 0.9);

/// Stacked round state: x (n*p), y / lambda / t (n*m each). t caches the
/// aggregate sum_j p_ij (y_i - y_j) of the current y.
struct SystemState {
  Vec x;
  Vec y;
  Vec lambda;
  Vec t;
  long round = 0;

  Vec lambda_column_sums(int m) const;  // sum_i lambda_i, an m-vector
  double norm() const;
};

SystemState init(const CoupledProblem& problem,
                 std::optional<Vec> x0 = std::nullopt,
                 std::optional<Vec> y0 = std::nullopt);

enum class Variant { dga, exact_mm, dga_algorithm1_literal };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant v);

// Per-agent updates. Each reads only the blocks passed in.
Vec local_x_update(const AgentSpec& agent, const Vec& x_i, const Vec& y_i,
                   double alpha);
Vec local_y_update(const AgentSpec& agent, const Vec& y_i, const Vec& x_i_new,
                   const Vec& lambda_i, const Vec& t_i, double eta, double rho);
Vec local_lambda_update(const Vec& lambda_i, const Vec& t_i_new, double rho);

struct StepOptions {
  Variant variant = Variant::dga;
  int threads = 1;
  /// Called after the y-exchange with the round's mailbox.
  std::function<void(long round, const RoundMailbox&)> on_exchange;
};

/// One synchronous round: x-phase, y-phase, y-exchange, lambda-phase.
/// Deterministic and independent of agent scheduling order.
void step(SystemState& state, const CoupledProblem& problem,
          const Hyperparameters& hp, const StepOptions& opts = {});

enum class RunStatus { converged, budget_exhausted, diverged };

struct RunOptions {
  Variant variant = Variant::dga;
  int threads = 1;
  bool record_snapshots = false;
  const Vec* reference_x = nullptr;  // fills dist_sq when set
  /// Extra per-round metrics (e.g. Omega-norm columns).
  std::function<void(const SystemState& prev, const SystemState& next,
                     TraceRow& row)>
      per_round;
  std::function<void(long round, const RoundMailbox&)> on_exchange;
};

struct RunResult {
  RunStatus status = RunStatus::budget_exhausted;
  SystemState state;
  IterationTrace trace;
  std::vector<SystemState> snapshots;  // only when record_snapshots
};

/// Iterates until max(feasibility, ||dx||/alpha) <= tol or the budget is
/// exhausted. Aborts with RunStatus::diverged once ||h|| exceeds 1e12.
RunResult run(const CoupledProblem& problem, const Hyperparameters& hp,
              const StopCriteria& stop, const RunOptions& opts = {});

/// Replays `rounds` rounds; before each round, for every agent, the state
/// blocks of all agents outside its closed neighborhood are randomized and
/// one round is recomputed. Any bit difference in the agent's advanced
/// blocks is a locality violation.
LocalityReport audit_locality(const CoupledProblem& problem,
                              const Hyperparameters& hp, long rounds,
                              std::uint64_t seed,
                              Variant variant = Variant::dga);

}  // namespace dga
