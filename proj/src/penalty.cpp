#include <lqp/penalty.hpp>

#include <lqp/linalg.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace lqp {

namespace {

void require_finite(bool ok, const NlpProblem& problem, const char* what) {
  if (!ok) throw EvaluationError("problem '" + problem.name + "': non-finite " + what);
}

void require_size(bool ok, const NlpProblem& problem, const char* what) {
  if (!ok) throw EvaluationError("problem '" + problem.name + "': wrong shape of " + what);
}

}  // namespace

std::pair<double, Vector> evaluate_values(const NlpProblem& problem, const Vector& x) {
  const double f = problem.eval_f(x);
  require_finite(std::isfinite(f), problem, "objective");
  Vector F = problem.eval_F(x);
  require_size(static_cast<std::size_t>(F.size()) == problem.m, problem, "F");
  require_finite(F.allFinite(), problem, "constraint value");
  return {f, std::move(F)};
}

Linearization linearize(const NlpProblem& problem, const Vector& x) {
  Linearization lin;
  lin.x = x;
  auto [f, F] = evaluate_values(problem, x);
  lin.f = f;
  lin.F = std::move(F);
  lin.grad_f = problem.eval_grad_f(x);
  require_size(static_cast<std::size_t>(lin.grad_f.size()) == problem.n, problem, "gradient");
  require_finite(lin.grad_f.allFinite(), problem, "gradient");
  lin.J = problem.eval_JF(x);
  require_size(static_cast<std::size_t>(lin.J.rows()) == problem.m &&
                   static_cast<std::size_t>(lin.J.cols()) == problem.n,
               problem, "Jacobian");
  require_finite(lin.J.allFinite(), problem, "Jacobian");
  return lin;
}

double penalty_value(double f, const Vector& F, PenaltyParams params) {
  return f + 0.5 * params.rho * F.squaredNorm();
}

double penalty_value(const NlpProblem& problem, const Vector& x, PenaltyParams params) {
  const auto [f, F] = evaluate_values(problem, x);
  const double P = penalty_value(f, F, params);
  if (!std::isfinite(P)) throw EvaluationError("problem '" + problem.name + "': penalty overflow");
  return P;
}

Vector penalty_gradient(const Linearization& lin, PenaltyParams params) {
  const Vector JtF = lin.J.transpose() * lin.F;
  return lin.grad_f + params.rho * JtF;
}

Vector penalty_gradient(const NlpProblem& problem, const Vector& x, PenaltyParams params) {
  return penalty_gradient(linearize(problem, x), params);
}

StepOutcome lqp_step(const Linearization& lin, PenaltyParams params, double beta) {
  const Vector g = penalty_gradient(lin, params);
  const Matrix H = assemble_normal_matrix(lin.J, params.rho, beta);
  const Vector d = solve_spd(H, g);

  StepOutcome out;
  out.delta_x = -d;
  out.x_next = lin.x + out.delta_x;
  out.subproblem_residual = (H * out.delta_x + g).norm();
  out.rhs_norm = g.norm();
  const Vector lin_F = lin.F + lin.J * out.delta_x;
  out.model_value = lin.f + lin.grad_f.dot(out.delta_x) +
                    0.5 * params.rho * lin_F.squaredNorm();
  return out;
}

StepOutcome lqp_step(const NlpProblem& problem, const Vector& x, PenaltyParams params,
                     double beta) {
  if (!(beta >= 0.0)) throw ConfigError("lqp_step: beta must be nonnegative");
  return lqp_step(linearize(problem, x), params, beta);
}

bool descent_check(double P_prev, double P_next, double beta, double delta_x_norm_sq) {
  const double slack = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(P_prev));
  return P_next <= P_prev - 0.5 * beta * delta_x_norm_sq + slack;
}

}  // namespace lqp
