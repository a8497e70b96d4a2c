#pragma once

#include <lqp/problem.hpp>

namespace lqp {

struct PenaltyParams {
  double rho = 1.0;
};

/// First-order data of the problem at a point. Built once per outer
/// iteration and shared by every backtracking trial.
struct Linearization {
  Vector x;
  double f = 0.0;
  Vector grad_f;
  Vector F;
  Matrix J;
};

/// Evaluates f, ∇f, F and J_F at x. Throws EvaluationError on non-finite
/// output or wrong shapes.
Linearization linearize(const NlpProblem& problem, const Vector& x);

/// Evaluates f(x) and F(x) with the same checks.
std::pair<double, Vector> evaluate_values(const NlpProblem& problem, const Vector& x);

/// P_ρ(x) = f(x) + (ρ/2)‖F(x)‖².
double penalty_value(const NlpProblem& problem, const Vector& x, PenaltyParams params);
double penalty_value(double f, const Vector& F, PenaltyParams params);

/// ∇P_ρ(x) = ∇f(x) + ρ·J_F(x)ᵀF(x).
Vector penalty_gradient(const NlpProblem& problem, const Vector& x, PenaltyParams params);
Vector penalty_gradient(const Linearization& lin, PenaltyParams params);

struct StepOutcome {
  Vector x_next;
  Vector delta_x;
  /// ‖(ρJᵀJ + βI)Δx + ∇f + ρJᵀF‖.
  double subproblem_residual = 0.0;
  /// ‖∇f + ρJᵀF‖, the scale the residual is measured against.
  double rhs_norm = 0.0;
  /// Linearized penalty model \bar{P}_ρ(x_next; x), without the proximal term.
  double model_value = 0.0;
};

/// Minimizes f(x) + ⟨∇f(x), d⟩ + (ρ/2)‖F(x) + J d‖² + (β/2)‖d‖² over d and
/// returns x_next = x + d. β = 0 is accepted here so that the Gauss-Newton
/// equivalence can be checked; the solver itself never passes β = 0.
StepOutcome lqp_step(const NlpProblem& problem, const Vector& x, PenaltyParams params,
                     double beta);
StepOutcome lqp_step(const Linearization& lin, PenaltyParams params, double beta);

/// Sufficient decrease test P_next ≤ P_prev − (β/2)‖Δx‖² with an additive
/// roundoff slack of 16·eps·(1 + |P_prev|).
bool descent_check(double P_prev, double P_next, double beta, double delta_x_norm_sq);

}  // namespace lqp
