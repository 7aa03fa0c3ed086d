#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "dga/analysis.hpp"
#include "dga/json_io.hpp"
#include "dga/oracle.hpp"
#include "dga/scenarios.hpp"
#include "dga/solver.hpp"
#include "dga/trace.hpp"

namespace {

namespace fs = std::filesystem;
using dga::json;

std::string out_dir() {
  if (const char* d = std::getenv("DGA_OUT_DIR")) return d;
  return ".";
}

std::string out_path(const std::string& explicit_path, const std::string& fallback) {
  if (!explicit_path.empty()) return explicit_path;
  return (fs::path(out_dir()) / fallback).string();
}

struct ProblemSource {
  std::string file;
  std::string scenario;
  std::uint64_t seed = 1;
  int n = 10, p = 1, m = 1;
  bool box = false;

  void add_flags(CLI::App* cmd) {
    auto* f = cmd->add_option("--problem", file, "problem JSON file");
    auto* s = cmd->add_option("--scenario", scenario,
                              "dispatch118 | random_quadratic | two_agent_analytic")
                  ->check(CLI::IsMember(
                      {"dispatch118", "random_quadratic", "two_agent_analytic"}));
    f->excludes(s);
    cmd->add_option("--seed", seed, "scenario seed");
    cmd->add_option("--n", n, "random_quadratic: agents");
    cmd->add_option("--p", p, "random_quadratic: local dimension");
    cmd->add_option("--m", m, "random_quadratic: constraint dimension");
    cmd->add_flag("--box", box, "random_quadratic: box sets instead of full space");
  }

  dga::CoupledProblem load() const {
    if (!file.empty()) return dga::problem_from_json(dga::load_json_file(file));
    if (scenario == "dispatch118") return dga::make_dispatch118(seed);
    if (scenario == "random_quadratic")
      return dga::make_random_quadratic(n, p, m, seed, box);
    if (scenario == "two_agent_analytic")
      return dga::make_two_agent_analytic().problem;
    throw CLI::ValidationError("exactly one of --problem / --scenario is required");
  }
};

struct ParamFlags {
  double alpha = 0.0, eta = 0.0, rho = 0.0;
  double safety = 0.9;
  bool explicit_params = false;

  void add_flags(CLI::App* cmd) {
    auto* a = cmd->add_option("--alpha", alpha, "primal step size");
    auto* e = cmd->add_option("--eta", eta, "dual step denominator");
    auto* r = cmd->add_option("--rho", rho, "penalty parameter");
    a->needs(e, r);
    e->needs(a, r);
    r->needs(a, e);
    cmd->add_flag("--auto-params", "derive parameters from the instance (default)");
    cmd->add_option("--safety", safety, "safety factor for derived parameters");
    cmd->callback([this, a] { explicit_params = a->count() > 0; });
  }

  dga::Hyperparameters resolve(const dga::CoupledProblem& problem) const {
    if (explicit_params) return {alpha, eta, rho};
    return dga::default_params(problem, safety);
  }
};

void apply_config_file(const std::string& path, ParamFlags& params,
                       dga::StopCriteria& stop, std::string& variant_name,
                       int& threads, CLI::App* cmd) {
  json cfg = dga::load_json_file(path);
  auto unset = [cmd](const std::string& flag) {
    auto* opt = cmd->get_option_no_throw(flag);
    return !opt || opt->count() == 0;
  };
  if (cfg.contains("alpha") && unset("--alpha")) {
    params.alpha = cfg.at("alpha").get<double>();
    params.eta = cfg.at("eta").get<double>();
    params.rho = cfg.at("rho").get<double>();
    params.explicit_params = true;
  }
  if (cfg.contains("safety") && unset("--safety"))
    params.safety = cfg.at("safety").get<double>();
  if (cfg.contains("max_rounds") && unset("--max-rounds"))
    stop.max_rounds = cfg.at("max_rounds").get<long>();
  if (cfg.contains("feas_tol") && unset("--feas-tol"))
    stop.feasibility_tol = cfg.at("feas_tol").get<double>();
  if (cfg.contains("step_tol") && unset("--step-tol"))
    stop.step_tol = cfg.at("step_tol").get<double>();
  if (cfg.contains("variant") && unset("--variant"))
    variant_name = cfg.at("variant").get<std::string>();
  if (cfg.contains("threads") && unset("--threads"))
    threads = cfg.at("threads").get<int>();
}

json validation_to_json(const dga::ValidationReport& report) {
  json conditions = json::array();
  for (const auto& c : report.conditions)
    conditions.push_back({{"name", c.name}, {"margin", c.margin}, {"pass", c.pass}});
  return {{"ok", report.ok()}, {"conditions", conditions}};
}

int run_command(const ProblemSource& source, const ParamFlags& params,
                dga::StopCriteria stop, const std::string& variant_name,
                int threads, bool force, bool want_reference, bool no_timing,
                const std::string& trace_path, const std::string& summary_path,
                const std::string& message_log_path) {
  auto problem = source.load();
  auto hp = params.resolve(problem);
  auto validation = dga::validate_params(problem, hp, dga::ValidationLevel::lemma1);
  if (!validation.ok()) {
    std::cerr << "invalid hyperparameters:\n" << validation.summary();
    if (!force) return 1;
    std::cerr << "--force given, running anyway\n";
  }

  dga::RunOptions opts;
  opts.variant = dga::variant_from_string(variant_name);
  opts.threads = threads;

  std::optional<dga::CentralizedSolution> oracle;
  std::optional<dga::OmegaMetric> metric;
  std::optional<dga::SystemState> h_star;
  if (want_reference) {
    oracle = dga::solve_centralized(problem, 1e-10);
    metric.emplace(problem, hp);
    h_star = dga::fixed_point_state(problem, *oracle);
    opts.reference_x = &oracle->x;
    opts.per_round = [&](const dga::SystemState& prev, const dga::SystemState& next,
                         dga::TraceRow& row) {
      row.delta_h_omega_sq = metric->norm_sq_diff(next, prev);
    };
  }

  std::ofstream message_log;
  if (!message_log_path.empty()) {
    message_log.open(message_log_path);
    if (!message_log) {
      std::cerr << "cannot write " << message_log_path << "\n";
      return 1;
    }
    opts.on_exchange = [&](long round, const dga::RoundMailbox& mailbox) {
      for (const auto& e : mailbox.entries()) {
        json y = json::array();
        for (Eigen::Index k = 0; k < e.payload.size(); ++k) y.push_back(e.payload(k));
        message_log << json{{"round", round}, {"from", e.from}, {"to", e.to},
                            {"y", y}}.dump()
                    << '\n';
      }
    };
  }

  auto result = dga::run(problem, hp, stop, opts);
  if (no_timing)
    for (auto& row : result.trace.rows) row.wall_time_s = 0.0;

  {
    std::ofstream out(out_path(trace_path, "trace.csv"));
    dga::write_csv(result.trace, out);
  }

  double total_time = 0.0;
  for (const auto& row : result.trace.rows) total_time += row.wall_time_s;
  const auto& last = result.trace.back();
  json summary = {
      {"status", result.status == dga::RunStatus::converged      ? "converged"
                 : result.status == dga::RunStatus::diverged     ? "diverged"
                                                                 : "budget_exhausted"},
      {"rounds", result.trace.rounds()},
      {"variant", to_string(opts.variant)},
      {"threads", threads},
      {"params", {{"alpha", hp.alpha}, {"eta", hp.eta}, {"rho", hp.rho}}},
      {"validation", validation_to_json(validation)},
      {"final",
       {{"feas_sq", last.feas_sq},
        {"opt_sq", last.opt_sq},
        {"consensus_sq", last.consensus_sq}}},
      {"wall_time_total_s", total_time}};
  if (want_reference) summary["final"]["dist_sq"] = last.dist_sq;
  dga::save_json_file(summary, out_path(summary_path, "summary.json"));

  switch (result.status) {
    case dga::RunStatus::converged: return 0;
    case dga::RunStatus::budget_exhausted: return 2;
    case dga::RunStatus::diverged: return 3;
  }
  return 3;
}

int verify_command(const ProblemSource& source, const ParamFlags& params,
                   long rounds, int threads, bool force,
                   const std::string& report_path) {
  auto problem = source.load();

  bool full_space = true;
  for (const auto& agent : problem.agents())
    full_space &= agent.set.kind() == dga::FeasibleSet::Kind::full_space;
  auto [l_f, mu] = problem.smoothness_bounds();
  const bool linear_regime = full_space && mu > 0.0;

  dga::Hyperparameters hp;
  if (params.explicit_params)
    hp = {params.alpha, params.eta, params.rho};
  else
    hp = linear_regime ? dga::linear_rate_params(problem, params.safety)
                       : dga::default_params(problem, params.safety);

  auto validation = dga::validate_params(problem, hp, dga::ValidationLevel::lemma1);
  if (!validation.ok()) {
    std::cerr << "invalid hyperparameters:\n" << validation.summary();
    if (!force) return 1;
  }

  dga::CentralizedSolution oracle;
  try {
    oracle = dga::solve_centralized(problem, 1e-10);
  } catch (const std::exception& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return 4;
  }

  json report = {{"params", {{"alpha", hp.alpha}, {"eta", hp.eta}, {"rho", hp.rho}}},
                 {"validation", validation_to_json(validation)},
                 {"lemma1_min_margin", nullptr},
                 {"lemma2_min_margin", nullptr},
                 {"sum_bound_ok", false},
                 {"sublinear_tail_ratio", nullptr},
                 {"linear_slope", nullptr},
                 {"linear_r2", nullptr}};
  bool all_pass = validation.ok();

  // A forced run with invalid parameters may diverge early; the report is
  // still written with whatever the truncated trace supports.
  try {
    dga::StopCriteria stop;
    stop.max_rounds = rounds;
    stop.feasibility_tol = 0.0;  // fixed-length run: every round feeds the checks
    stop.step_tol = 0.0;
    dga::RunOptions opts;
    opts.threads = threads;
    opts.record_snapshots = true;
    auto result = dga::run(problem, hp, stop, opts);

    dga::OmegaMetric metric(problem, hp);
    auto h_star = dga::fixed_point_state(problem, oracle);

    auto lemma1 = dga::verify_lemma1(result.snapshots, h_star, metric, l_f);
    auto lemma2 = dga::verify_lemma2(result.snapshots, metric, lemma1.scale);
    bool sum_bound =
        dga::check_summation_bound(result.snapshots, h_star, metric, l_f);

    std::vector<double> delta_h;
    for (std::size_t k = 0; k + 1 < result.snapshots.size(); ++k)
      delta_h.push_back(
          metric.norm_sq_diff(result.snapshots[k + 1], result.snapshots[k]));
    auto sublinear = dga::estimate_rate(delta_h, dga::RateMode::sublinear);

    report["lemma1_min_margin"] = lemma1.min_margin;
    report["lemma2_min_margin"] = lemma2.min_margin;
    report["sum_bound_ok"] = sum_bound;
    report["sublinear_tail_ratio"] = sublinear.tail_ratio;
    all_pass &= lemma1.ok && lemma2.ok && sum_bound && sublinear.ok;

    if (linear_regime) {
      std::vector<double> gaps;
      for (const auto& snap : result.snapshots)
        gaps.push_back(std::sqrt(std::max(0.0, metric.norm_sq_diff(snap, h_star))));
      auto linear = dga::estimate_rate(gaps, dga::RateMode::linear);
      report["linear_slope"] = linear.slope;
      report["linear_r2"] = linear.r2;
      all_pass &= linear.ok;
    }
  } catch (const std::exception& e) {
    std::cerr << "verification aborted: " << e.what() << "\n";
    all_pass = false;
  }
  report["all_pass"] = all_pass;

  dga::save_json_file(report, out_path(report_path, "verify.json"));
  std::cout << report.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int compare_command(const ProblemSource& source, const ParamFlags& params,
                    long rounds, int threads, const std::string& dir) {
  auto problem = source.load();
  auto hp = params.resolve(problem);
  dga::StopCriteria stop;
  stop.max_rounds = rounds;
  stop.feasibility_tol = 0.0;
  stop.step_tol = 0.0;

  fs::path base = dir.empty() ? fs::path(out_dir()) : fs::path(dir);
  fs::create_directories(base);

  json comparison;
  double mean_round_s[2] = {0.0, 0.0};
  const dga::Variant variants[2] = {dga::Variant::dga, dga::Variant::exact_mm};
  for (int v = 0; v < 2; ++v) {
    dga::RunOptions opts;
    opts.variant = variants[v];
    opts.threads = threads;
    auto result = dga::run(problem, hp, stop, opts);
    std::ofstream out(base / ("trace_" + to_string(variants[v]) + ".csv"));
    dga::write_csv(result.trace, out);
    double total = 0.0;
    for (const auto& row : result.trace.rows) total += row.wall_time_s;
    mean_round_s[v] = total / static_cast<double>(result.trace.rounds());
    comparison[to_string(variants[v])] = {
        {"mean_round_s", mean_round_s[v]},
        {"final_feas_sq", result.trace.back().feas_sq}};
  }
  comparison["wall_time_ratio_exact_over_dga"] = mean_round_s[1] / mean_round_s[0];
  dga::save_json_file(comparison, (base / "compare.json").string());
  std::cout << comparison.dump(2) << "\n";
  return 0;
}

int generate_command(const ProblemSource& source, const std::string& out) {
  if (source.scenario.empty())
    throw CLI::ValidationError("generate requires --scenario");
  auto problem = source.load();
  std::string path =
      out_path(out, source.scenario + "_" + std::to_string(source.seed) + ".json");
  dga::save_json_file(dga::problem_to_json(problem), path);

  json manifest = {{"kind", source.scenario}, {"seed", source.seed}};
  if (source.scenario == "random_quadratic")
    manifest["overrides"] = {{"n", source.n}, {"p", source.p}, {"m", source.m},
                             {"box", source.box}};
  fs::path mp = fs::path(path);
  mp.replace_extension(".manifest.json");
  dga::save_json_file(manifest, mp.string());
  std::cout << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed solver for coupled-equality-constrained optimization"};
  app.require_subcommand(1);

  ProblemSource gen_source;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "emit a problem JSON + manifest");
  gen_source.add_flags(generate);
  generate->add_option("--out", gen_out, "output path");

  ProblemSource run_source;
  ParamFlags run_params;
  dga::StopCriteria run_stop;
  std::string run_variant = "dga";
  int run_threads = 1;
  bool run_force = false, run_reference = false, run_no_timing = false;
  std::string run_trace, run_summary, run_messages, run_config;
  auto* run = app.add_subcommand("run", "run a solver variant, write trace + summary");
  run_source.add_flags(run);
  run_params.add_flags(run);
  run->add_option("--config", run_config, "run-config JSON (flags override)");
  run->add_option("--max-rounds", run_stop.max_rounds, "round budget");
  run->add_option("--feas-tol", run_stop.feasibility_tol, "feasibility tolerance");
  run->add_option("--step-tol", run_stop.step_tol, "step tolerance (||dx||/alpha)");
  run->add_option("--variant", run_variant, "dga | exact_mm | dga_algorithm1_literal");
  run->add_option("--threads", run_threads, "intra-round worker threads");
  run->add_option("--trace", run_trace, "trace CSV path");
  run->add_option("--summary", run_summary, "summary JSON path");
  run->add_option("--log-messages", run_messages, "per-round message log (JSON lines)");
  run->add_flag("--reference", run_reference,
                "solve centrally first; fill dist/Omega trace columns");
  run->add_flag("--force", run_force, "run despite failed parameter validation");
  run->add_flag("--no-timing", run_no_timing, "zero the wall_time_s trace column");

  ProblemSource verify_source;
  ParamFlags verify_params;
  long verify_rounds = 2000;
  int verify_threads = 1;
  bool verify_force = false;
  std::string verify_report;
  auto* verify = app.add_subcommand("verify", "check descent/rate properties vs oracle");
  verify_source.add_flags(verify);
  verify_params.add_flags(verify);
  verify->add_option("--rounds", verify_rounds, "rounds to record");
  verify->add_option("--threads", verify_threads, "intra-round worker threads");
  verify->add_option("--report", verify_report, "report JSON path");
  verify->add_flag("--force", verify_force, "verify despite failed validation");

  ProblemSource cmp_source;
  ParamFlags cmp_params;
  long cmp_rounds = 1000;
  int cmp_threads = 1;
  std::string cmp_dir;
  auto* compare = app.add_subcommand(
      "compare", "run dga and exact_mm on one instance; report wall-time ratio");
  cmp_source.add_flags(compare);
  cmp_params.add_flags(compare);
  compare->add_option("--rounds", cmp_rounds, "rounds per variant");
  compare->add_option("--threads", cmp_threads, "intra-round worker threads");
  compare->add_option("--out-dir", cmp_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return generate_command(gen_source, gen_out);
    if (*run) {
      if (!run_config.empty())
        apply_config_file(run_config, run_params, run_stop, run_variant,
                          run_threads, run);
      return run_command(run_source, run_params, run_stop, run_variant,
                         run_threads, run_force, run_reference, run_no_timing,
                         run_trace, run_summary, run_messages);
    }
    if (*verify)
      return verify_command(verify_source, verify_params, verify_rounds,
                            verify_threads, verify_force, verify_report);
    if (*compare)
      return compare_command(cmp_source, cmp_params, cmp_rounds, cmp_threads,
                             cmp_dir);
  } catch (const dga::infeasible_problem_error& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
