#include <lqp/rho_search.hpp>

#include <cmath>
#include <sstream>

namespace lqp {

void RhoSearchConfig::validate() const {
  if (!(std::isfinite(rho0) && rho0 > 0.0)) throw ConfigError("rho0 must be positive");
  if (!(std::isfinite(tau) && tau > 1.0)) throw ConfigError("tau must exceed 1");
  if (!(eps_feas_target > 0.0)) throw ConfigError("eps_feas_target must be positive");
  if (max_rounds == 0) throw ConfigError("max_rounds must be positive");
}

RhoSearchResult solve_with_trial_rho(const NlpProblem& problem, const Vector& x0,
                                     const RhoSearchConfig& config) {
  config.validate();

  RhoSearchResult out;
  Vector x = x0;
  SolverConfig inner = config.inner;
  double rho = config.rho0;

  for (std::size_t round = 1; round <= config.max_rounds; ++round) {
    rho *= config.tau;
    inner.rho = rho;
    SolveResult res = solve(problem, x, inner);

    const double feas = res.history.back().feas_norm;
    out.trace.push_back({rho, feas, res.history.size() - 1, res.status});
    out.rounds = round;
    out.rho_final = rho;
    x = res.x_final;
    inner.beta_init = std::max(res.beta_final, inner.beta_min);

    if (is_error(res.status) || feas <= config.eps_feas_target) {
      out.result = std::move(res);
      return out;
    }
    out.result = std::move(res);
  }

  std::ostringstream msg;
  msg << "still infeasible after " << config.max_rounds << " rounds (rho=" << rho
      << ", ||F||=" << out.trace.back().feas_norm << ")";
  out.result.status = SolveStatus::RhoSearchExhausted;
  out.result.message = msg.str();
  return out;
}

}  // namespace lqp
