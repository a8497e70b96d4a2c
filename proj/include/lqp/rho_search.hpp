#pragma once

#include <lqp/solver.hpp>

#include <cstddef>
#include <vector>

namespace lqp {

struct RhoSearchConfig {
  double rho0 = 1e3;
  double tau = 10.0;
  double eps_feas_target = 1e-5;
  std::size_t max_rounds = 12;
  /// Template for every inner solve; its rho is overwritten per round.
  SolverConfig inner = default_inner();

  void validate() const;

  /// Inner solves stop at an approximate stationary point of P_ρ, since the
  /// feasibility test cannot be met while ρ is still too small.
  static SolverConfig default_inner() {
    SolverConfig c;
    c.eps_stationarity = 1e-8;
    c.max_outer_iters = 2000;
    return c;
  }
};

struct RhoRound {
  double rho = 0.0;
  double feas_norm = 0.0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::MaxIters;
};

struct RhoSearchResult {
  /// Result of the last inner solve. Its status is RhoSearchExhausted when
  /// every round ended infeasible.
  SolveResult result;
  std::size_t rounds = 0;
  double rho_final = 0.0;
  std::vector<RhoRound> trace;
};

/// Repeats the LQP solve with ρ_{k+1} = τ·ρ_k, warm-started from the previous
/// round's iterate and β, until ‖F(x)‖ ≤ eps_feas_target.
RhoSearchResult solve_with_trial_rho(const NlpProblem& problem, const Vector& x0,
                                     const RhoSearchConfig& config);

}  // namespace lqp
