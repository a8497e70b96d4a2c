#pragma once

#include <lqp/library.hpp>
#include <lqp/rho_search.hpp>
#include <lqp/solver.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lqp {

enum class SolverKind { Lqp, LqpTrialRho, GradientDescent, GaussNewton };

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver(std::string_view name);

/// One row of a benchmark summary.
struct RunReport {
  std::string problem;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string solver;
  std::size_t iters = 0;
  double cpu_seconds = 0.0;
  double f_final = 0.0;
  double feas_final = 0.0;
  SolveStatus status = SolveStatus::MaxIters;
  double rho_used = 0.0;
  /// Set when the run could not start (bad precondition, invalid config).
  std::optional<std::string> error;
};

enum class RateModel { Linear, Sublinear, Inconclusive };
std::string_view to_string(RateModel model);

/// Least-squares fit of log‖x_k − x*‖ against k (linear) and against log k
/// (sublinear). For the linear model fit_parameter is the contraction factor
/// exp(slope); for the sublinear model it is the decay exponent −slope.
struct RateDiagnostic {
  RateModel model = RateModel::Inconclusive;
  double fit_parameter = 0.0;
  double r_squared = 0.0;
};

/// Empty unless a reference solution exists and at least 10 iterates with
/// stored x are available.
std::optional<RateDiagnostic> fit_rate(std::span<const IterateRecord> history,
                                       const Vector& x_star);

struct RunOptions {
  SolverConfig solver;
  double rho0 = 1e3;
  double tau = 10.0;
  std::size_t max_rounds = 12;
  double gd_step = 1e-7;
  std::optional<std::size_t> size;
  /// 0 keeps the documented starting point; any other value perturbs it by a
  /// seeded uniform offset in [−0.1, 0.1] per coordinate.
  unsigned seed = 0;
  std::optional<std::filesystem::path> out_dir;
};

struct RunOutcome {
  RunReport report;
  SolveResult result;
  std::optional<RateDiagnostic> rate;
};

/// Solves a registered problem. Throws UnknownProblem for an unregistered
/// name and ConfigError for invalid options or violated preconditions.
RunOutcome run(const ProblemRegistry& registry, const std::string& problem, SolverKind solver,
               const RunOptions& options);

/// Prints `name n m has_reference` rows for every entry at its default size.
void list_problems(const ProblemRegistry& registry, std::ostream& os);

struct ProfileRow {
  std::string metric;  // "cpu_seconds" or "iters"
  std::string problem;
  std::string solver;
  double value = 0.0;
  /// metric / best metric over solvers that solved the problem; +inf when unsolved.
  double ratio = 0.0;
  bool solved = false;
  double f_final = 0.0;
  double f_best = 0.0;
  /// |f_final − f_best| ≤ 1%·max(1, |f_best|).
  bool within_1pct = false;
};

struct BatchResult {
  std::vector<RunReport> reports;
  std::vector<ProfileRow> profile;
};

/// Runs every (problem, solver) pair. Failed runs are recorded and the batch
/// continues. Pairs run on up to `jobs` threads; output order follows the
/// input lists.
BatchResult batch(const ProblemRegistry& registry, const std::vector<std::string>& problems,
                  const std::vector<SolverKind>& solvers, const RunOptions& options,
                  std::size_t jobs = 1);

std::vector<ProfileRow> performance_profile(std::span<const RunReport> reports,
                                            double max_wall_time);

// File formats.

inline constexpr std::string_view kHistoryHeader =
    "k,f,feas_norm,penalty,beta,delta_x_norm,kkt_stationarity,backtracks,time";

void write_history_csv(std::ostream& os, std::span<const IterateRecord> history);
/// Parses the columns of kHistoryHeader; x and diagnostics are left empty.
std::vector<IterateRecord> read_history_csv(std::istream& is);

void write_report(std::ostream& os, const RunReport& report,
                  const std::optional<RateDiagnostic>& rate = {});
RunReport read_report(std::istream& is);

void write_summary_csv(std::ostream& os, std::span<const RunReport> reports);
void write_profile_csv(std::ostream& os, std::span<const ProfileRow> rows);
std::vector<ProfileRow> read_profile_csv(std::istream& is);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace lqp
