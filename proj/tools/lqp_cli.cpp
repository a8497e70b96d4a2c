// Command-line driver for the LQP solver and its baselines.
//
//   lqp list
//   lqp run <problem> <solver> [options]
//   lqp batch --problems a,b --solvers lqp,gd [options]
//
// Exit codes: 0 success, 1 invalid configuration, 2 solver error,
// 3 unknown problem.

#include <lqp/harness.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct CliOptions {
  double rho = 1e7;
  std::string beta_mode = "adaptive";
  double beta_fixed = 1e4;
  double beta_min = 1e-4;
  double mu = 2.0;
  double eps_obj = 1e-3;
  double eps_feas = 1e-5;
  double eps_kkt = 0.0;
  std::size_t max_iters = 10000;
  double max_time = 1800.0;
  double tau = 10.0;
  double rho0 = 1e3;
  double step = 1e-7;
  std::size_t size = 0;
  unsigned seed = 0;
  std::string out_dir;
};

void add_solver_flags(CLI::App& cmd, CliOptions& o) {
  cmd.add_option("--rho", o.rho, "penalty parameter")->capture_default_str();
  cmd.add_option("--beta-mode", o.beta_mode, "adaptive or fixed regularization")
      ->check(CLI::IsMember({"adaptive", "fixed"}))
      ->capture_default_str();
  cmd.add_option("--beta-fixed", o.beta_fixed, "beta used in fixed mode")->capture_default_str();
  cmd.add_option("--beta-min", o.beta_min, "lower bound on beta")->capture_default_str();
  cmd.add_option("--mu", o.mu, "backtracking factor (> 1)")->capture_default_str();
  cmd.add_option("--eps-obj", o.eps_obj, "tolerance on |f_k - f_{k-1}|")->capture_default_str();
  cmd.add_option("--eps-feas", o.eps_feas, "tolerance on ||F(x_k)||")->capture_default_str();
  cmd.add_option("--eps-kkt", o.eps_kkt, "KKT tolerance (0 disables)")->capture_default_str();
  cmd.add_option("--max-iters", o.max_iters, "outer iteration cap")->capture_default_str();
  cmd.add_option("--max-time", o.max_time, "wall-clock cap in seconds")->capture_default_str();
  cmd.add_option("--tau", o.tau, "rho growth factor for lqp-trial-rho")->capture_default_str();
  cmd.add_option("--rho0", o.rho0, "initial rho for lqp-trial-rho")->capture_default_str();
  cmd.add_option("--step", o.step, "step size for gd")->capture_default_str();
  cmd.add_option("--size", o.size, "problem size parameter N (0 = default)");
  cmd.add_option("--seed", o.seed, "perturb the starting point (0 = documented start)")
      ->capture_default_str();
  cmd.add_option("--out-dir", o.out_dir, "directory for history, report and profile files");
}

lqp::RunOptions to_run_options(const CliOptions& o) {
  lqp::RunOptions r;
  r.solver.rho = o.rho;
  r.solver.beta_mode = o.beta_mode == "fixed" ? lqp::BetaMode::Fixed : lqp::BetaMode::Adaptive;
  r.solver.beta_fixed = o.beta_fixed;
  r.solver.beta_min = o.beta_min;
  r.solver.mu = o.mu;
  r.solver.eps_obj = o.eps_obj;
  r.solver.eps_feas = o.eps_feas;
  if (o.eps_kkt > 0.0) r.solver.eps_kkt = o.eps_kkt;
  r.solver.max_outer_iters = o.max_iters;
  r.solver.max_wall_time = o.max_time;
  r.tau = o.tau;
  r.rho0 = o.rho0;
  r.gd_step = o.step;
  if (o.size > 0) r.size = o.size;
  r.seed = o.seed;
  if (!o.out_dir.empty()) r.out_dir = o.out_dir;
  if (!(r.tau > 1.0)) throw lqp::ConfigError("tau must exceed 1");
  if (!(r.rho0 > 0.0)) throw lqp::ConfigError("rho0 must be positive");
  if (!(r.gd_step > 0.0)) throw lqp::ConfigError("step must be positive");
  return r;
}

lqp::SolverKind require_solver(const std::string& name) {
  const auto kind = lqp::parse_solver(name);
  if (!kind) throw lqp::ConfigError("unknown solver '" + name + "'");
  return *kind;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized quadratic penalty solver and benchmark harness"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  // Separate option sets so a config section for one subcommand cannot leak
  // into the other.
  CliOptions run_flags, batch_flags;

  auto* list_cmd = app.add_subcommand("list", "list registered problems");

  auto* run_cmd = app.add_subcommand("run", "solve one registered problem");
  std::string problem, solver;
  run_cmd->add_option("problem", problem, "problem name")->required();
  run_cmd->add_option("solver", solver, "lqp | lqp-trial-rho | gd | gauss-newton")->required();
  add_solver_flags(*run_cmd, run_flags);

  auto* batch_cmd = app.add_subcommand("batch", "run every problem/solver pair");
  std::vector<std::string> problems, solvers;
  std::size_t jobs = 1;
  batch_cmd->add_option("--problems", problems, "problem names")->delimiter(',')->required();
  batch_cmd->add_option("--solvers", solvers, "solver names")->delimiter(',')->required();
  batch_cmd->add_option("--jobs", jobs, "concurrent runs")->capture_default_str();
  add_solver_flags(*batch_cmd, batch_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const auto& registry = lqp::default_registry();
  try {
    if (*list_cmd) {
      lqp::list_problems(registry, std::cout);
      return 0;
    }

    if (*run_cmd) {
      const lqp::RunOptions run_opts = to_run_options(run_flags);
      const auto kind = require_solver(solver);
      const auto outcome = lqp::run(registry, problem, kind, run_opts);
      lqp::write_report(std::cout, outcome.report, outcome.rate);
      for (const auto& w : outcome.result.warnings) std::cerr << "warning: " << w << '\n';
      if (lqp::is_error(outcome.report.status)) {
        std::cerr << "solver error: " << outcome.result.message << '\n';
        return 2;
      }
      return 0;
    }

    if (*batch_cmd) {
      const lqp::RunOptions run_opts = to_run_options(batch_flags);
      std::vector<lqp::SolverKind> kinds;
      for (const auto& s : solvers) kinds.push_back(require_solver(s));
      for (const auto& p : problems)
        if (!registry.contains(p)) throw lqp::UnknownProblem("unknown problem '" + p + "'");
      const auto result = lqp::batch(registry, problems, kinds, run_opts, jobs);
      lqp::write_summary_csv(std::cout, result.reports);
      for (const auto& r : result.reports)
        if (r.error) std::cerr << r.problem << '/' << r.solver << ": " << *r.error << '\n';
      return 0;
    }
  } catch (const lqp::UnknownProblem& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const lqp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
