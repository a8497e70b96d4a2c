#pragma once

#include <lqp/solver.hpp>

#include <cstddef>

namespace lqp {

/// x − (JᵀJ)⁻¹JᵀF. Requires f(x) = 0 (throws ConfigError otherwise).
Vector gauss_newton_step(const NlpProblem& problem, const Vector& x);

/// x − (JᵀJ + βI)⁻¹JᵀF. Requires f(x) = 0 and β > 0.
Vector levenberg_marquardt_step(const NlpProblem& problem, const Vector& x, double beta);

/// Undamped Gauss-Newton iterations on a problem with f ≡ 0, recorded and
/// stopped with the same machinery as solve. ρ from the config only scales
/// the reported penalty and multiplier.
SolveResult gauss_newton_solve(const NlpProblem& problem, const Vector& x0,
                               const SolverConfig& config);

/// x_{k+1} = x_k − step_size·∇P_ρ(x_k). Reports Divergence once P_ρ has
/// increased for 10 consecutive iterations or stops being finite.
SolveResult penalty_gradient_descent(const NlpProblem& problem, const Vector& x0,
                                     PenaltyParams params, double step_size,
                                     std::size_t max_iters,
                                     const SolverConfig& stopping = SolverConfig{});

}  // namespace lqp
