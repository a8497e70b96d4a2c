#include <lqp/solver.hpp>

#include <lqp/linalg.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

namespace lqp {

namespace {

constexpr std::array<std::pair<SolveStatus, std::string_view>, 11> kStatusNames{{
    {SolveStatus::ConvergedObjFeas, "ConvergedObjFeas"},
    {SolveStatus::ConvergedKkt, "ConvergedKkt"},
    {SolveStatus::ConvergedStationary, "ConvergedStationary"},
    {SolveStatus::MaxIters, "MaxIters"},
    {SolveStatus::TimeOut, "TimeOut"},
    {SolveStatus::BacktrackFailure, "BacktrackFailure"},
    {SolveStatus::FixedBetaDescentFailure, "FixedBetaDescentFailure"},
    {SolveStatus::EvaluationError, "EvaluationError"},
    {SolveStatus::LinearSolveFailure, "LinearSolveFailure"},
    {SolveStatus::Divergence, "Divergence"},
    {SolveStatus::RhoSearchExhausted, "RhoSearchExhausted"},
}};

}  // namespace

std::string_view to_string(SolveStatus status) {
  for (const auto& [s, name] : kStatusNames)
    if (s == status) return name;
  return "Unknown";
}

std::optional<SolveStatus> parse_status(std::string_view text) {
  for (const auto& [s, name] : kStatusNames)
    if (name == text) return s;
  return std::nullopt;
}

bool is_converged(SolveStatus status) {
  return status == SolveStatus::ConvergedObjFeas || status == SolveStatus::ConvergedKkt ||
         status == SolveStatus::ConvergedStationary;
}

bool is_error(SolveStatus status) {
  switch (status) {
    case SolveStatus::ConvergedObjFeas:
    case SolveStatus::ConvergedKkt:
    case SolveStatus::ConvergedStationary:
    case SolveStatus::MaxIters:
    case SolveStatus::TimeOut:
      return false;
    default:
      return true;
  }
}

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(std::isfinite(rho) && rho > 0.0, "rho must be positive");
  require(std::isfinite(beta_min) && beta_min > 0.0, "beta_min must be positive");
  require(std::isfinite(beta_init) && beta_init > 0.0, "beta_init must be positive");
  require(std::isfinite(mu) && mu > 1.0, "mu must exceed 1");
  require(eps_obj > 0.0 && eps_feas > 0.0, "tolerances must be positive");
  require(!eps_kkt || *eps_kkt > 0.0, "eps_kkt must be positive");
  require(!eps_stationarity || *eps_stationarity > 0.0, "eps_stationarity must be positive");
  require(max_wall_time > 0.0, "max_wall_time must be positive");
  require(max_backtracks >= 1, "max_backtracks must be at least 1");
  if (beta_mode == BetaMode::Fixed)
    require(std::isfinite(beta_fixed) && beta_fixed >= beta_min,
            "beta_fixed must be at least beta_min");
}

KktResidual kkt_residuals(const NlpProblem& problem, const Vector& x, const Vector& lambda) {
  if (static_cast<std::size_t>(x.size()) != problem.n ||
      static_cast<std::size_t>(lambda.size()) != problem.m)
    throw ConfigError("kkt_residuals: dimension mismatch");
  const Linearization lin = linearize(problem, x);
  return {(lin.grad_f + lin.J.transpose() * lambda).norm(), lin.F.norm()};
}

BacktrackResult backtrack(const NlpProblem& problem, const Linearization& lin,
                          double penalty_at_x, PenaltyParams params, double beta_prev,
                          const SolverConfig& config) {
  BacktrackResult out;
  double beta = std::max(beta_prev / config.mu, config.beta_min);
  for (std::size_t tries = 1; tries <= config.max_backtracks; ++tries, beta *= config.mu) {
    StepOutcome step = lqp_step(lin, params, beta);
    out.max_relative_residual = std::max(out.max_relative_residual,
                                         step.subproblem_residual / (1.0 + step.rhs_norm));
    double f_next = 0.0;
    Vector F_next;
    try {
      std::tie(f_next, F_next) = evaluate_values(problem, step.x_next);
    } catch (const EvaluationError&) {
      // A trial point outside the evaluable region counts as a failed descent.
      continue;
    }
    const double P_next = penalty_value(f_next, F_next, params);
    if (std::isfinite(P_next) &&
        descent_check(penalty_at_x, P_next, beta, step.delta_x.squaredNorm())) {
      out.step = std::move(step);
      out.beta_used = beta;
      out.tries = tries;
      out.f_next = f_next;
      out.F_next = std::move(F_next);
      out.penalty_next = P_next;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "no descent after " << config.max_backtracks << " trials (last beta " << beta / config.mu
      << ")";
  throw BacktrackFailure(msg.str());
}

BacktrackResult backtrack(const NlpProblem& problem, const Vector& x, PenaltyParams params,
                          double beta_prev, const SolverConfig& config) {
  const Linearization lin = linearize(problem, x);
  return backtrack(problem, lin, penalty_value(lin.f, lin.F, params), params, beta_prev, config);
}

std::optional<SolveStatus> stopping_criterion(std::span<const IterateRecord> history,
                                              const KktResidual& kkt,
                                              const SolverConfig& config) {
  if (history.empty()) return std::nullopt;
  if (config.eps_kkt && kkt.stationarity <= *config.eps_kkt && kkt.feasibility <= *config.eps_kkt)
    return SolveStatus::ConvergedKkt;
  if (history.size() >= 2) {
    const auto& cur = history[history.size() - 1];
    const auto& prev = history[history.size() - 2];
    if (std::abs(cur.f - prev.f) <= config.eps_obj && kkt.feasibility <= config.eps_feas)
      return SolveStatus::ConvergedObjFeas;
  }
  if (config.eps_stationarity && kkt.stationarity <= *config.eps_stationarity)
    return SolveStatus::ConvergedStationary;
  return std::nullopt;
}

double penalty_lipschitz_bound(const SmoothnessConstants& c, double rho, double max_F) {
  return c.grad_lipschitz + rho * (c.jac_lipschitz * max_F + c.jac_bound * c.jac_bound);
}

double estimate_gamma(const NlpProblem& problem, std::span<const IterateRecord> history,
                      PenaltyParams params) {
  if (!problem.known_constants)
    throw MissingConstants("problem '" + problem.name + "' has no smoothness constants");
  if (history.empty()) throw ConfigError("estimate_gamma: empty history");
  const auto& c = *problem.known_constants;
  double max_F = 0.0;
  for (const auto& rec : history) max_F = std::max(max_F, rec.feas_norm);
  return c.grad_lipschitz +
         params.rho * (c.jac_lipschitz * max_F + 4.0 * c.jac_bound * c.jac_bound) +
         history.back().beta;
}

NlpProblem with_eval_counter(const NlpProblem& problem, EvalCounts& counts) {
  NlpProblem out = problem;
  EvalCounts* c = &counts;
  out.eval_f = [c, fn = problem.eval_f](const Vector& x) {
    ++c->f;
    return fn(x);
  };
  out.eval_grad_f = [c, fn = problem.eval_grad_f](const Vector& x) {
    ++c->grad_f;
    return fn(x);
  };
  out.eval_F = [c, fn = problem.eval_F](const Vector& x) {
    ++c->F;
    return fn(x);
  };
  out.eval_JF = [c, fn = problem.eval_JF](const Vector& x) {
    ++c->JF;
    return fn(x);
  };
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

IterateRecord make_record(std::size_t k, const Linearization& lin, PenaltyParams params,
                          const SolverConfig& config, std::size_t n) {
  IterateRecord rec;
  rec.k = k;
  if (n <= config.history_x_limit) rec.x = lin.x;
  rec.f = lin.f;
  rec.feas_norm = lin.F.norm();
  rec.penalty = penalty_value(lin.f, lin.F, params);
  rec.kkt_stationarity = penalty_gradient(lin, params).norm();
  return rec;
}

// Completes a linearization whose values were already computed by the step.
Linearization complete_linearization(const NlpProblem& problem, Vector x, double f, Vector F) {
  Linearization lin;
  lin.grad_f = problem.eval_grad_f(x);
  lin.J = problem.eval_JF(x);
  if (static_cast<std::size_t>(lin.grad_f.size()) != problem.n || !lin.grad_f.allFinite() ||
      static_cast<std::size_t>(lin.J.rows()) != problem.m ||
      static_cast<std::size_t>(lin.J.cols()) != problem.n || !lin.J.allFinite())
    throw EvaluationError("problem '" + problem.name + "': invalid derivative");
  lin.x = std::move(x);
  lin.f = f;
  lin.F = std::move(F);
  return lin;
}

}  // namespace

SolveResult solve(const NlpProblem& problem, const Vector& x0, const SolverConfig& config) {
  config.validate();
  problem.validate();
  if (static_cast<std::size_t>(x0.size()) != problem.n || !x0.allFinite())
    throw ConfigError("solve: x0 must be finite with dimension n");

  const auto start = Clock::now();
  SolveResult result;
  result.rho = config.rho;
  const NlpProblem counted = with_eval_counter(problem, result.evals);
  const PenaltyParams params{config.rho};

  if (problem.penalty_threshold &&
      config.rho < std::max(1.0, 3.0 * *problem.penalty_threshold)) {
    std::ostringstream msg;
    msg << "rho=" << config.rho << " is below max{1, 3*rho0} with rho0="
        << *problem.penalty_threshold;
    result.warnings.push_back(msg.str());
  }

  Linearization lin;
  try {
    lin = linearize(counted, x0);
  } catch (const EvaluationError& e) {
    result.status = SolveStatus::EvaluationError;
    result.message = e.what();
    result.x_final = x0;
    result.multiplier = Vector::Zero(static_cast<Eigen::Index>(problem.m));
    IterateRecord rec;
    rec.x = x0;
    rec.f = rec.penalty = rec.feas_norm = std::nan("");
    result.history.push_back(rec);
    return result;
  }

  {
    const double F0_sq = lin.F.squaredNorm();
    if (F0_sq > 1.0) {
      std::ostringstream msg;
      msg << "initial point violates ||F(x0)||^2 <= min{1, 2c0/rho}: ||F(x0)||^2=" << F0_sq
          << ", c0=rho/2*||F(x0)||^2=" << 0.5 * config.rho * F0_sq;
      result.warnings.push_back(msg.str());
    }
  }

  IterateRecord first = make_record(0, lin, params, config, problem.n);
  first.model_value = first.penalty;
  first.cumulative_time = seconds_since(start);
  result.history.push_back(std::move(first));

  double beta_prev = std::max(config.beta_init, config.beta_min);
  result.beta_final = beta_prev;
  std::optional<SolveStatus> status;

  try {
    while (!status) {
      const std::size_t k = result.history.size() - 1;
      if (k >= config.max_outer_iters) {
        status = SolveStatus::MaxIters;
        break;
      }
      if (seconds_since(start) > config.max_wall_time) {
        status = SolveStatus::TimeOut;
        break;
      }

      const double P_k = result.history.back().penalty;
      StepOutcome step;
      double beta_used = 0.0;
      std::size_t backtracks = 0;
      double rel_residual = 0.0;
      double f_next = 0.0;
      Vector F_next;

      if (config.beta_mode == BetaMode::Adaptive) {
        BacktrackResult bt;
        try {
          bt = backtrack(counted, lin, P_k, params, beta_prev, config);
        } catch (const BacktrackFailure& e) {
          status = SolveStatus::BacktrackFailure;
          result.message = e.what();
          break;
        }
        step = std::move(bt.step);
        beta_used = bt.beta_used;
        backtracks = bt.tries - 1;
        rel_residual = bt.max_relative_residual;
        f_next = bt.f_next;
        F_next = std::move(bt.F_next);
      } else {
        beta_used = config.beta_fixed;
        step = lqp_step(lin, params, beta_used);
        rel_residual = step.subproblem_residual / (1.0 + step.rhs_norm);
        std::tie(f_next, F_next) = evaluate_values(counted, step.x_next);
        const double P_next = penalty_value(f_next, F_next, params);
        if (!descent_check(P_k, P_next, beta_used, step.delta_x.squaredNorm())) {
          status = SolveStatus::FixedBetaDescentFailure;
          std::ostringstream msg;
          msg << "descent failed at k=" << k << " with fixed beta=" << beta_used;
          result.message = msg.str();
          break;
        }
      }

      lin = complete_linearization(counted, step.x_next, f_next, std::move(F_next));
      beta_prev = beta_used;
      result.beta_final = beta_used;

      IterateRecord rec = make_record(k + 1, lin, params, config, problem.n);
      rec.beta = beta_used;
      rec.delta_x_norm = step.delta_x.norm();
      rec.backtrack_count = backtracks;
      rec.subproblem_residual = rel_residual;
      rec.model_value = step.model_value;
      rec.cumulative_time = seconds_since(start);
      const KktResidual kkt{rec.kkt_stationarity, rec.feas_norm};
      result.history.push_back(std::move(rec));

      const std::size_t tail = std::min<std::size_t>(2, result.history.size());
      status = stopping_criterion(
          std::span<const IterateRecord>(result.history).last(tail), kkt, config);
    }
  } catch (const EvaluationError& e) {
    status = SolveStatus::EvaluationError;
    result.message = e.what();
  } catch (const NotPositiveDefinite& e) {
    status = SolveStatus::LinearSolveFailure;
    result.message = e.what();
  }

  result.status = *status;
  result.x_final = lin.x;
  result.multiplier = config.rho * lin.F;
  return result;
}

}  // namespace lqp
