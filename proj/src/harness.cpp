#include <lqp/harness.hpp>

#include <lqp/baselines.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace lqp {

namespace {

constexpr std::pair<SolverKind, std::string_view> kSolverNames[] = {
    {SolverKind::Lqp, "lqp"},
    {SolverKind::LqpTrialRho, "lqp-trial-rho"},
    {SolverKind::GradientDescent, "gd"},
    {SolverKind::GaussNewton, "gauss-newton"},
};

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error("cannot parse number '" + std::string(text) + "'");
  return value;
}

std::size_t parse_count(std::string_view text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error("cannot parse count '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct LinearFit {
  double slope = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  if (stt == 0.0) return fit;
  fit.slope = sty / stt;
  fit.r_squared = syy == 0.0 ? 1.0 : (sty * sty) / (stt * syy);
  return fit;
}

Vector starting_point(const NlpProblem& problem, unsigned seed) {
  Vector x0 = problem.initial_point.size() != 0
                  ? problem.initial_point
                  : Vector(Vector::Zero(static_cast<Eigen::Index>(problem.n)));
  if (seed != 0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> offset(-0.1, 0.1);
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) += offset(rng);
  }
  return x0;
}

}  // namespace

std::string_view to_string(SolverKind kind) {
  for (const auto& [k, name] : kSolverNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  for (const auto& [k, n] : kSolverNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(RateModel model) {
  switch (model) {
    case RateModel::Linear:
      return "linear";
    case RateModel::Sublinear:
      return "sublinear";
    case RateModel::Inconclusive:
      break;
  }
  return "inconclusive";
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::optional<RateDiagnostic> fit_rate(std::span<const IterateRecord> history,
                                       const Vector& x_star) {
  if (history.size() < 10) return std::nullopt;
  std::vector<double> k_lin, k_log, log_err;
  for (const auto& rec : history) {
    if (rec.x.size() != x_star.size()) return std::nullopt;
    const double err = (rec.x - x_star).norm();
    if (rec.k == 0 || !(err > 0.0) || !std::isfinite(err)) continue;
    k_lin.push_back(static_cast<double>(rec.k));
    k_log.push_back(std::log(static_cast<double>(rec.k)));
    log_err.push_back(std::log(err));
  }
  if (log_err.size() < 3) return RateDiagnostic{};

  const LinearFit lin = least_squares(k_lin, log_err);
  const LinearFit sub = least_squares(k_log, log_err);
  RateDiagnostic diag;
  constexpr double kMinRSquared = 0.9;
  if (lin.r_squared >= sub.r_squared) {
    diag.r_squared = lin.r_squared;
    diag.fit_parameter = std::exp(lin.slope);
    diag.model = lin.r_squared >= kMinRSquared ? RateModel::Linear : RateModel::Inconclusive;
  } else {
    diag.r_squared = sub.r_squared;
    diag.fit_parameter = -sub.slope;
    diag.model = sub.r_squared >= kMinRSquared ? RateModel::Sublinear : RateModel::Inconclusive;
  }
  return diag;
}

RunOutcome run(const ProblemRegistry& registry, const std::string& problem_name,
               SolverKind solver, const RunOptions& options) {
  const NlpProblem problem = registry.build(problem_name, options.size);
  options.solver.validate();
  const Vector x0 = starting_point(problem, options.seed);

  RunOutcome out;
  std::optional<std::size_t> total_iters;
  const auto wall_start = std::chrono::steady_clock::now();
  switch (solver) {
    case SolverKind::Lqp:
      out.result = solve(problem, x0, options.solver);
      break;
    case SolverKind::LqpTrialRho: {
      RhoSearchConfig rs;
      rs.rho0 = options.rho0;
      rs.tau = options.tau;
      rs.max_rounds = options.max_rounds;
      rs.eps_feas_target = options.solver.eps_feas;
      rs.inner = options.solver;
      if (!rs.inner.eps_stationarity)
        rs.inner.eps_stationarity = RhoSearchConfig::default_inner().eps_stationarity;
      RhoSearchResult search = solve_with_trial_rho(problem, x0, rs);
      out.result = std::move(search.result);
      std::size_t sum = 0;
      for (const auto& round : search.trace) sum += round.iterations;
      total_iters = sum;
      break;
    }
    case SolverKind::GradientDescent:
      out.result = penalty_gradient_descent(problem, x0, {options.solver.rho}, options.gd_step,
                                            options.solver.max_outer_iters, options.solver);
      break;
    case SolverKind::GaussNewton:
      out.result = gauss_newton_solve(problem, x0, options.solver);
      break;
  }
  // Wall time of the solve; process CPU time would mix in concurrent batch runs.
  const double cpu =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  RunReport& rep = out.report;
  rep.problem = problem_name;
  rep.n = problem.n;
  rep.m = problem.m;
  rep.solver = std::string(to_string(solver));
  rep.iters = total_iters.value_or(out.result.history.size() - 1);
  rep.cpu_seconds = cpu;
  rep.f_final = out.result.history.back().f;
  rep.feas_final = out.result.history.back().feas_norm;
  rep.status = out.result.status;
  rep.rho_used = out.result.rho;

  if (problem.reference_solution)
    out.rate = fit_rate(out.result.history, problem.reference_solution->x);

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    const std::string stem = problem_name + "." + rep.solver;
    std::ofstream hist(*options.out_dir / (stem + ".history.csv"));
    write_history_csv(hist, out.result.history);
    std::ofstream report(*options.out_dir / (stem + ".report.txt"));
    write_report(report, rep, out.rate);
  }
  return out;
}

void list_problems(const ProblemRegistry& registry, std::ostream& os) {
  os << std::left << std::setw(16) << "name" << std::setw(6) << "n" << std::setw(6) << "m"
     << "has_reference\n";
  for (const auto& name : registry.names()) {
    const NlpProblem p = registry.build(name);
    os << std::setw(16) << name << std::setw(6) << p.n << std::setw(6) << p.m
       << (p.reference_solution ? "yes" : "no") << '\n';
  }
}

std::vector<ProfileRow> performance_profile(std::span<const RunReport> reports,
                                            double max_wall_time) {
  auto solved = [&](const RunReport& r) {
    return !r.error && is_converged(r.status) && r.cpu_seconds <= max_wall_time;
  };

  std::map<std::string, double> f_best;
  for (const auto& r : reports) {
    if (!solved(r)) continue;
    auto [it, inserted] = f_best.emplace(r.problem, r.f_final);
    if (!inserted) it->second = std::min(it->second, r.f_final);
  }

  std::vector<ProfileRow> rows;
  for (const std::string metric : {"cpu_seconds", "iters"}) {
    auto value_of = [&](const RunReport& r) {
      return metric == "iters" ? static_cast<double>(r.iters) : r.cpu_seconds;
    };
    std::map<std::string, double> best;
    for (const auto& r : reports) {
      if (!solved(r)) continue;
      auto [it, inserted] = best.emplace(r.problem, value_of(r));
      if (!inserted) it->second = std::min(it->second, value_of(r));
    }
    for (const auto& r : reports) {
      ProfileRow row;
      row.metric = metric;
      row.problem = r.problem;
      row.solver = r.solver;
      row.value = value_of(r);
      row.solved = solved(r);
      row.f_final = r.f_final;
      const auto fb = f_best.find(r.problem);
      row.f_best = fb != f_best.end() ? fb->second : std::numeric_limits<double>::quiet_NaN();
      row.within_1pct =
          row.solved && std::abs(r.f_final - row.f_best) <= 0.01 * std::max(1.0, std::abs(row.f_best));
      if (!row.solved) {
        row.ratio = std::numeric_limits<double>::infinity();
      } else {
        const double b = best.at(r.problem);
        // Zero-cost runs (timer resolution) tie with the best.
        row.ratio = b > 0.0 ? row.value / b : (row.value > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

BatchResult batch(const ProblemRegistry& registry, const std::vector<std::string>& problems,
                  const std::vector<SolverKind>& solvers, const RunOptions& options,
                  std::size_t jobs) {
  if (problems.empty() || solvers.empty()) throw ConfigError("batch: empty problem or solver list");
  options.solver.validate();

  struct Pair {
    std::string problem;
    SolverKind solver;
  };
  std::vector<Pair> pairs;
  for (const auto& p : problems)
    for (auto s : solvers) pairs.push_back({p, s});

  auto one = [&](const Pair& pair) {
    try {
      return run(registry, pair.problem, pair.solver, options).report;
    } catch (const std::exception& e) {
      RunReport rep;
      rep.problem = pair.problem;
      rep.solver = std::string(to_string(pair.solver));
      rep.f_final = rep.feas_final = std::numeric_limits<double>::quiet_NaN();
      rep.rho_used = options.solver.rho;
      if (registry.contains(pair.problem)) {
        const NlpProblem p = registry.build(pair.problem, options.size);
        rep.n = p.n;
        rep.m = p.m;
      }
      rep.error = e.what();
      return rep;
    }
  };

  BatchResult out;
  out.reports.resize(pairs.size());
  jobs = std::max<std::size_t>(1, jobs);
  for (std::size_t begin = 0; begin < pairs.size(); begin += jobs) {
    const std::size_t end = std::min(pairs.size(), begin + jobs);
    std::vector<std::future<RunReport>> futures;
    for (std::size_t i = begin; i < end; ++i)
      futures.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, one,
                                   std::cref(pairs[i])));
    for (std::size_t i = begin; i < end; ++i) out.reports[i] = futures[i - begin].get();
  }
  out.profile = performance_profile(out.reports, options.solver.max_wall_time);

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    std::ofstream summary(*options.out_dir / "summary.csv");
    write_summary_csv(summary, out.reports);
    std::ofstream profile(*options.out_dir / "profile.csv");
    write_profile_csv(profile, out.profile);
  }
  return out;
}

void write_history_csv(std::ostream& os, std::span<const IterateRecord> history) {
  os << kHistoryHeader << '\n';
  for (const auto& r : history) {
    os << r.k << ',' << format_double(r.f) << ',' << format_double(r.feas_norm) << ','
       << format_double(r.penalty) << ',' << format_double(r.beta) << ','
       << format_double(r.delta_x_norm) << ',' << format_double(r.kkt_stationarity) << ','
       << r.backtrack_count << ',' << format_double(r.cumulative_time) << '\n';
  }
}

std::vector<IterateRecord> read_history_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kHistoryHeader)
    throw std::runtime_error("history CSV: unexpected header");
  std::vector<IterateRecord> out;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    if (cols.size() != 9) throw std::runtime_error("history CSV: expected 9 columns");
    IterateRecord r;
    r.k = parse_count(cols[0]);
    r.f = parse_double(cols[1]);
    r.feas_norm = parse_double(cols[2]);
    r.penalty = parse_double(cols[3]);
    r.beta = parse_double(cols[4]);
    r.delta_x_norm = parse_double(cols[5]);
    r.kkt_stationarity = parse_double(cols[6]);
    r.backtrack_count = parse_count(cols[7]);
    r.cumulative_time = parse_double(cols[8]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_report(std::ostream& os, const RunReport& r, const std::optional<RateDiagnostic>& rate) {
  os << "problem: " << r.problem << '\n'
     << "n: " << r.n << '\n'
     << "m: " << r.m << '\n'
     << "solver: " << r.solver << '\n'
     << "iters: " << r.iters << '\n'
     << "cpu_seconds: " << format_double(r.cpu_seconds) << '\n'
     << "f_final: " << format_double(r.f_final) << '\n'
     << "feas_final: " << format_double(r.feas_final) << '\n'
     << "status: " << to_string(r.status) << '\n'
     << "rho_used: " << format_double(r.rho_used) << '\n';
  if (r.error) os << "error: " << *r.error << '\n';
  if (rate) {
    os << "rate_model: " << to_string(rate->model) << '\n'
       << "rate_fit_parameter: " << format_double(rate->fit_parameter) << '\n'
       << "rate_r_squared: " << format_double(rate->r_squared) << '\n';
  }
}

RunReport read_report(std::istream& is) {
  RunReport r;
  std::string line;
  while (std::getline(is, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const auto key = trim(std::string_view(line).substr(0, colon));
    const auto value = trim(std::string_view(line).substr(colon + 1));
    if (key == "problem") r.problem = value;
    else if (key == "n") r.n = parse_count(value);
    else if (key == "m") r.m = parse_count(value);
    else if (key == "solver") r.solver = value;
    else if (key == "iters") r.iters = parse_count(value);
    else if (key == "cpu_seconds") r.cpu_seconds = parse_double(value);
    else if (key == "f_final") r.f_final = parse_double(value);
    else if (key == "feas_final") r.feas_final = parse_double(value);
    else if (key == "rho_used") r.rho_used = parse_double(value);
    else if (key == "error") r.error = std::string(value);
    else if (key == "status") {
      const auto s = parse_status(value);
      if (!s) throw std::runtime_error("report: unknown status '" + std::string(value) + "'");
      r.status = *s;
    }
  }
  return r;
}

void write_summary_csv(std::ostream& os, std::span<const RunReport> reports) {
  os << "problem,n,m,solver,iters,cpu_seconds,f_final,feas_final,status,rho_used\n";
  for (const auto& r : reports) {
    os << r.problem << ',' << r.n << ',' << r.m << ',' << r.solver << ',' << r.iters << ','
       << format_double(r.cpu_seconds) << ',' << format_double(r.f_final) << ','
       << format_double(r.feas_final) << ',' << (r.error ? "Failed" : to_string(r.status)) << ','
       << format_double(r.rho_used) << '\n';
  }
}

void write_profile_csv(std::ostream& os, std::span<const ProfileRow> rows) {
  os << "metric,problem,solver,value,ratio,solved,f_final,f_best,within_1pct\n";
  for (const auto& r : rows) {
    os << r.metric << ',' << r.problem << ',' << r.solver << ',' << format_double(r.value) << ','
       << format_double(r.ratio) << ',' << (r.solved ? 1 : 0) << ','
       << format_double(r.f_final) << ',' << format_double(r.f_best) << ','
       << (r.within_1pct ? 1 : 0) << '\n';
  }
}

std::vector<ProfileRow> read_profile_csv(std::istream& is) {
  std::string line;
  std::getline(is, line);
  std::vector<ProfileRow> out;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    if (cols.size() != 9) throw std::runtime_error("profile CSV: expected 9 columns");
    ProfileRow r;
    r.metric = cols[0];
    r.problem = cols[1];
    r.solver = cols[2];
    r.value = parse_double(cols[3]);
    r.ratio = parse_double(cols[4]);
    r.solved = cols[5] == "1";
    r.f_final = parse_double(cols[6]);
    r.f_best = parse_double(cols[7]);
    r.within_1pct = cols[8] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lqp
