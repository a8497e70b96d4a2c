#pragma once

#include <lqp/penalty.hpp>
#include <lqp/problem.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lqp {

enum class BetaMode { Adaptive, Fixed };

enum class SolveStatus {
  ConvergedObjFeas,
  ConvergedKkt,
  ConvergedStationary,
  MaxIters,
  TimeOut,
  BacktrackFailure,
  FixedBetaDescentFailure,
  EvaluationError,
  LinearSolveFailure,
  Divergence,
  RhoSearchExhausted,
};

std::string_view to_string(SolveStatus status);
std::optional<SolveStatus> parse_status(std::string_view text);
bool is_converged(SolveStatus status);
bool is_error(SolveStatus status);

struct SolverConfig {
  double rho = 1e7;
  double beta_min = 1e-4;
  double beta_init = 1.0;
  double mu = 2.0;
  BetaMode beta_mode = BetaMode::Adaptive;
  double beta_fixed = 1e4;
  double eps_obj = 1e-3;
  double eps_feas = 1e-5;
  /// Definition-1 KKT tolerance on both stationarity and feasibility.
  std::optional<double> eps_kkt;
  /// Stop once ‖∇P_ρ(x_k)‖ ≤ eps_stationarity, regardless of feasibility.
  std::optional<double> eps_stationarity;
  std::size_t max_outer_iters = 10000;
  std::size_t max_backtracks = 60;
  double max_wall_time = 1800.0;
  /// Full iterates are kept in the history only up to this dimension.
  std::size_t history_x_limit = 100;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct IterateRecord {
  std::size_t k = 0;
  Vector x;  // empty when n exceeds SolverConfig::history_x_limit
  double f = 0.0;
  double feas_norm = 0.0;
  double penalty = 0.0;
  double beta = 0.0;  // β_k used to reach x_k; 0 for k = 0
  double delta_x_norm = 0.0;
  /// ‖∇f(x_k) + J_F(x_k)ᵀλ_k‖ with λ_k = ρF(x_k), i.e. ‖∇P_ρ(x_k)‖.
  double kkt_stationarity = 0.0;
  std::size_t backtrack_count = 0;
  double cumulative_time = 0.0;
  /// Largest ‖H·d − g‖ / (1 + ‖g‖) over all linear solves of this iteration.
  double subproblem_residual = 0.0;
  /// \bar{P}_ρ(x_k; x_{k−1}); equals penalty at k = 0.
  double model_value = 0.0;
};

struct EvalCounts {
  std::size_t f = 0;
  std::size_t grad_f = 0;
  std::size_t F = 0;
  std::size_t JF = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIters;
  Vector x_final;
  /// λ = ρ·F(x_final).
  Vector multiplier;
  std::vector<IterateRecord> history;
  EvalCounts evals;
  double rho = 0.0;
  double beta_final = 0.0;
  std::string message;
  std::vector<std::string> warnings;
};

struct KktResidual {
  double stationarity = 0.0;
  double feasibility = 0.0;
};

/// ‖∇f(x) + J_F(x)ᵀλ‖ and ‖F(x)‖.
KktResidual kkt_residuals(const NlpProblem& problem, const Vector& x, const Vector& lambda);

struct BacktrackResult {
  StepOutcome step;
  double beta_used = 0.0;
  std::size_t tries = 0;
  double f_next = 0.0;
  Vector F_next;
  double penalty_next = 0.0;
  /// Largest relative linear-system residual over all trials.
  double max_relative_residual = 0.0;
};

/// Thrown by backtrack when no β up to μ^max_backtracks·β⁰ gives descent.
class BacktrackFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive choice of β for one outer iteration.
///
/// Starts at β⁰ = max{β_prev/μ, β_min} and multiplies by μ until the step
/// passes descent_check against P_ρ(x).
BacktrackResult backtrack(const NlpProblem& problem, const Vector& x, PenaltyParams params,
                          double beta_prev, const SolverConfig& config);
BacktrackResult backtrack(const NlpProblem& problem, const Linearization& lin,
                          double penalty_at_x, PenaltyParams params, double beta_prev,
                          const SolverConfig& config);

/// Practical test on |f_k − f_{k−1}| and ‖F(x_k)‖, or the optional KKT and
/// penalty-stationarity tests. `history` holds the last one or two records.
std::optional<SolveStatus> stopping_criterion(std::span<const IterateRecord> history,
                                              const KktResidual& kkt,
                                              const SolverConfig& config);

/// Runs the linearized quadratic penalty method from x0.
///
/// Solver failures are reported through SolveResult::status with the partial
/// history attached; only invalid input (config, dimensions) throws.
SolveResult solve(const NlpProblem& problem, const Vector& x0, const SolverConfig& config);

/// Γ_{k+1} = L_f + ρ(L_F·Δ_F + 4M_F²) + β_{k+1} for the last record of
/// `history`, with Δ_F the largest ‖F‖ seen so far. Throws MissingConstants
/// when the problem carries no smoothness constants.
double estimate_gamma(const NlpProblem& problem, std::span<const IterateRecord> history,
                      PenaltyParams params);

/// L_f + ρ(L_F·max_F + M_F²).
double penalty_lipschitz_bound(const SmoothnessConstants& c, double rho, double max_F);

/// Wraps every evaluator of `problem` so calls are tallied into `counts`.
/// The counters must outlive the returned problem.
NlpProblem with_eval_counter(const NlpProblem& problem, EvalCounts& counts);

}  // namespace lqp
