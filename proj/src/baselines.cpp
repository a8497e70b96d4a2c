#include <lqp/baselines.hpp>

#include <lqp/linalg.hpp>

#include <chrono>
#include <cmath>
#include <sstream>

namespace lqp {

namespace {

using Clock = std::chrono::steady_clock;

void require_null_objective(const NlpProblem& problem, const Vector& x) {
  if (problem.eval_f(x) != 0.0)
    throw ConfigError("problem '" + problem.name + "' has a nonzero objective; " +
                      "Gauss-Newton and Levenberg-Marquardt need f = 0");
}

Vector damped_step(const NlpProblem& problem, const Vector& x, double beta) {
  const Matrix J = problem.eval_JF(x);
  const Vector F = problem.eval_F(x);
  const Matrix H = assemble_normal_matrix(J, 1.0, beta);
  const Vector JtF = J.transpose() * F;
  return x - solve_spd(H, JtF);
}

IterateRecord record_at(std::size_t k, const Linearization& lin, PenaltyParams params,
                        const SolverConfig& config, std::size_t n) {
  IterateRecord rec;
  rec.k = k;
  if (n <= config.history_x_limit) rec.x = lin.x;
  rec.f = lin.f;
  rec.feas_norm = lin.F.norm();
  rec.penalty = penalty_value(lin.f, lin.F, params);
  rec.model_value = rec.penalty;
  rec.kkt_stationarity = penalty_gradient(lin, params).norm();
  return rec;
}

std::optional<SolveStatus> check_stop(const SolveResult& result, const SolverConfig& config) {
  const auto& rec = result.history.back();
  const std::size_t tail = std::min<std::size_t>(2, result.history.size());
  return stopping_criterion(std::span<const IterateRecord>(result.history).last(tail),
                            {rec.kkt_stationarity, rec.feas_norm}, config);
}

}  // namespace

Vector gauss_newton_step(const NlpProblem& problem, const Vector& x) {
  require_null_objective(problem, x);
  return damped_step(problem, x, 0.0);
}

Vector levenberg_marquardt_step(const NlpProblem& problem, const Vector& x, double beta) {
  if (!(beta > 0.0)) throw ConfigError("levenberg_marquardt_step: beta must be positive");
  require_null_objective(problem, x);
  return damped_step(problem, x, beta);
}

SolveResult gauss_newton_solve(const NlpProblem& problem, const Vector& x0,
                               const SolverConfig& config) {
  config.validate();
  problem.validate();
  if (static_cast<std::size_t>(x0.size()) != problem.n || !x0.allFinite())
    throw ConfigError("gauss_newton_solve: x0 must be finite with dimension n");
  require_null_objective(problem, x0);

  const auto start = Clock::now();
  SolveResult result;
  result.rho = config.rho;
  const NlpProblem counted = with_eval_counter(problem, result.evals);
  const PenaltyParams params{config.rho};

  Vector x = x0;
  Linearization lin;
  std::optional<SolveStatus> status;
  try {
    lin = linearize(counted, x);
    result.history.push_back(record_at(0, lin, params, config, problem.n));
    while (!status) {
      const std::size_t k = result.history.size() - 1;
      if (k >= config.max_outer_iters) {
        status = SolveStatus::MaxIters;
        break;
      }
      if (std::chrono::duration<double>(Clock::now() - start).count() > config.max_wall_time) {
        status = SolveStatus::TimeOut;
        break;
      }
      const Matrix H = assemble_normal_matrix(lin.J, 1.0, 0.0);
      const Vector g = lin.J.transpose() * lin.F;
      const Vector d = solve_spd(H, g);
      lin = linearize(counted, Vector(lin.x - d));

      IterateRecord rec = record_at(k + 1, lin, params, config, problem.n);
      rec.delta_x_norm = d.norm();
      rec.subproblem_residual = (H * d - g).norm() / (1.0 + g.norm());
      rec.cumulative_time = std::chrono::duration<double>(Clock::now() - start).count();
      result.history.push_back(std::move(rec));
      status = check_stop(result, config);
    }
  } catch (const EvaluationError& e) {
    status = SolveStatus::EvaluationError;
    result.message = e.what();
  } catch (const NotPositiveDefinite& e) {
    status = SolveStatus::LinearSolveFailure;
    result.message = e.what();
  }
  if (result.history.empty()) {
    IterateRecord rec;
    rec.x = x0;
    result.history.push_back(rec);
    lin.x = x0;
    lin.F = Vector::Zero(static_cast<Eigen::Index>(problem.m));
  }
  result.status = *status;
  result.x_final = lin.x;
  result.multiplier = config.rho * lin.F;
  return result;
}

SolveResult penalty_gradient_descent(const NlpProblem& problem, const Vector& x0,
                                     PenaltyParams params, double step_size,
                                     std::size_t max_iters, const SolverConfig& stopping) {
  if (!(step_size > 0.0)) throw ConfigError("penalty_gradient_descent: step_size must be positive");
  if (!(params.rho > 0.0)) throw ConfigError("penalty_gradient_descent: rho must be positive");
  problem.validate();
  if (static_cast<std::size_t>(x0.size()) != problem.n || !x0.allFinite())
    throw ConfigError("penalty_gradient_descent: x0 must be finite with dimension n");

  SolverConfig config = stopping;
  config.rho = params.rho;
  config.max_outer_iters = max_iters;
  config.validate();

  const auto start = Clock::now();
  SolveResult result;
  result.rho = params.rho;
  result.beta_final = 1.0 / step_size;
  const NlpProblem counted = with_eval_counter(problem, result.evals);

  Linearization lin;
  std::optional<SolveStatus> status;
  std::size_t increases = 0;
  try {
    lin = linearize(counted, x0);
    result.history.push_back(record_at(0, lin, params, config, problem.n));
    while (!status) {
      const std::size_t k = result.history.size() - 1;
      if (k >= config.max_outer_iters) {
        status = SolveStatus::MaxIters;
        break;
      }
      if (std::chrono::duration<double>(Clock::now() - start).count() > config.max_wall_time) {
        status = SolveStatus::TimeOut;
        break;
      }
      const Vector delta = -step_size * penalty_gradient(lin, params);
      const Vector x_next = lin.x + delta;
      Linearization next;
      try {
        next = linearize(counted, x_next);
      } catch (const EvaluationError& e) {
        status = SolveStatus::Divergence;
        result.message = e.what();
        break;
      }
      const double P_next = penalty_value(next.f, next.F, params);
      if (!std::isfinite(P_next)) {
        status = SolveStatus::Divergence;
        result.message = "penalty overflow";
        break;
      }
      increases = P_next > result.history.back().penalty ? increases + 1 : 0;
      lin = std::move(next);

      IterateRecord rec = record_at(k + 1, lin, params, config, problem.n);
      rec.beta = 1.0 / step_size;
      rec.delta_x_norm = delta.norm();
      rec.cumulative_time = std::chrono::duration<double>(Clock::now() - start).count();
      result.history.push_back(std::move(rec));

      if (increases >= 10) {
        status = SolveStatus::Divergence;
        std::ostringstream msg;
        msg << "penalty increased for 10 consecutive iterations at k=" << k + 1;
        result.message = msg.str();
        break;
      }
      status = check_stop(result, config);
    }
  } catch (const EvaluationError& e) {
    status = SolveStatus::EvaluationError;
    result.message = e.what();
  }
  if (result.history.empty()) {
    IterateRecord rec;
    rec.x = x0;
    result.history.push_back(rec);
    lin.x = x0;
    lin.F = Vector::Zero(static_cast<Eigen::Index>(problem.m));
  }
  result.status = *status;
  result.x_final = lin.x;
  result.multiplier = params.rho * lin.F;
  return result;
}

}  // namespace lqp
