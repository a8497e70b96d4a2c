#include <lqp/problem.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace lqp {

void NlpProblem::validate() const {
  if (n == 0) throw ConfigError("problem '" + name + "': n must be positive");
  if (m > n) throw ConfigError("problem '" + name + "': m > n, LICQ cannot hold");
  if (!eval_f || !eval_grad_f || !eval_F || !eval_JF)
    throw ConfigError("problem '" + name + "': missing evaluator");
  if (initial_point.size() != 0 && static_cast<std::size_t>(initial_point.size()) != n)
    throw ConfigError("problem '" + name + "': initial point has wrong dimension");
}

NlpProblem transform_with_slacks(const InequalityProblem& problem) {
  // Evaluators capture a shared copy so the result outlives the argument.
  auto src = std::make_shared<const InequalityProblem>(problem);
  const auto p = static_cast<Eigen::Index>(src->p);
  const auto q = static_cast<Eigen::Index>(src->q);
  const auto r = static_cast<Eigen::Index>(src->r);

  NlpProblem out;
  out.name = problem.name;
  out.n = src->p + src->r;
  out.m = src->q + src->r;

  out.eval_f = [src, p](const Vector& x) { return src->eval_g(x.head(p)); };
  out.eval_grad_f = [src, p, r](const Vector& x) {
    Vector g(p + r);
    g.head(p) = src->eval_grad_g(x.head(p));
    g.tail(r).setZero();
    return g;
  };
  out.eval_F = [src, p, q, r](const Vector& x) {
    const Vector y = x.head(p);
    const Vector s = x.tail(r);
    Vector F(q + r);
    if (q > 0) F.head(q) = src->eval_G(y);
    F.tail(r) = src->eval_H(y) + s.cwiseProduct(s);
    return F;
  };
  out.eval_JF = [src, p, q, r](const Vector& x) {
    const Vector y = x.head(p);
    Matrix J = Matrix::Zero(q + r, p + r);
    if (q > 0) J.topLeftCorner(q, p) = src->eval_JG(y);
    J.bottomLeftCorner(r, p) = src->eval_JH(y);
    for (Eigen::Index i = 0; i < r; ++i) J(q + i, p + i) = 2.0 * x(p + i);
    return J;
  };
  return out;
}

namespace {

double rel_error(double analytic, double fd) {
  const double scale = std::max({1.0, std::abs(analytic), std::abs(fd)});
  return std::abs(analytic - fd) / scale;
}

}  // namespace

DerivativeCheckReport check_derivatives(const NlpProblem& problem,
                                        const std::vector<Vector>& points,
                                        double tol) {
  if (!(tol > 0.0)) throw ConfigError("check_derivatives: tol must be positive");

  DerivativeCheckReport report;
  const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
  const auto n = static_cast<Eigen::Index>(problem.n);
  const auto m = static_cast<Eigen::Index>(problem.m);

  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const Vector& x = points[idx];
    try {
      if (x.size() != n) throw EvaluationError("probe point has wrong dimension");
      const Vector grad = problem.eval_grad_f(x);
      const Matrix J = problem.eval_JF(x);
      if (grad.size() != n || J.rows() != m || J.cols() != n)
        throw EvaluationError("derivative has wrong shape");
      if (!grad.allFinite() || !J.allFinite())
        throw EvaluationError("non-finite derivative");

      for (Eigen::Index i = 0; i < n; ++i) {
        const double h = base_step * (1.0 + std::abs(x(i)));
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const double fp = problem.eval_f(xp);
        const double fm = problem.eval_f(xm);
        const Vector Fp = problem.eval_F(xp);
        const Vector Fm = problem.eval_F(xm);
        if (!std::isfinite(fp) || !std::isfinite(fm) || !Fp.allFinite() ||
            !Fm.allFinite())
          throw EvaluationError("non-finite value at finite-difference probe");
        // Use the realized step to cancel representation error in x ± h.
        const double width = xp(i) - xm(i);

        report.max_grad_error =
            std::max(report.max_grad_error, rel_error(grad(i), (fp - fm) / width));
        for (Eigen::Index j = 0; j < m; ++j) {
          report.max_jac_error = std::max(
              report.max_jac_error, rel_error(J(j, i), (Fp(j) - Fm(j)) / width));
        }
      }
    } catch (const std::exception& e) {
      report.failed_point = idx;
      report.failure = e.what();
      report.sample_points = idx;
      report.pass = false;
      return report;
    }
    report.sample_points = idx + 1;
  }

  report.pass = report.max_grad_error <= tol && report.max_jac_error <= tol;
  return report;
}

}  // namespace lqp
