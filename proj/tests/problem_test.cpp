#include <lqp/library.hpp>
#include <lqp/problem.hpp>

#include "support.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace lqp;

namespace {

// min y s.t. 1 − y ≤ 0.
InequalityProblem half_line() {
  InequalityProblem p;
  p.name = "half-line";
  p.p = 1;
  p.q = 0;
  p.r = 1;
  p.eval_g = [](const Vector& y) { return y[0]; };
  p.eval_grad_g = [](const Vector&) { return Vector::Ones(1).eval(); };
  p.eval_H = [](const Vector& y) { return Vector::Constant(1, 1.0 - y[0]); };
  p.eval_JH = [](const Vector&) { return Matrix::Constant(1, 1, -1.0); };
  return p;
}

NlpProblem scalar_problem(bool wrong_gradient) {
  NlpProblem p;
  p.name = "scalar";
  p.n = 1;
  p.m = 1;
  p.eval_f = [](const Vector& x) { return x[0] * x[0]; };
  p.eval_grad_f = [wrong_gradient](const Vector& x) {
    return Vector::Constant(1, (wrong_gradient ? 2.2 : 2.0) * x[0]);
  };
  p.eval_F = [](const Vector& x) { return Vector::Constant(1, x[0] - 1.0); };
  p.eval_JF = [](const Vector&) { return Matrix::Ones(1, 1).eval(); };
  return p;
}

}  // namespace

TEST_CASE("slack transform of a single inequality") {
  const NlpProblem t = transform_with_slacks(half_line());
  CHECK(t.n == 2);
  CHECK(t.m == 1);

  const Vector boundary = Vector::Map(std::vector<double>{1.0, 0.0}.data(), 2);
  CHECK(t.eval_F(boundary)[0] == 0.0);

  Vector x(2);
  x << 2.0, 1.0;
  CHECK(t.eval_F(x)[0] == 0.0);
  const Matrix J = t.eval_JF(x);
  CHECK(J(0, 0) == -1.0);
  CHECK(J(0, 1) == 2.0);
}

TEST_CASE("slack transform with an equality block") {
  InequalityProblem p = half_line();
  p.q = 1;
  p.eval_G = [](const Vector& y) { return Vector::Constant(1, y[0] * y[0] - 1.0); };
  p.eval_JG = [](const Vector& y) { return Matrix::Constant(1, 1, 2.0 * y[0]); };
  const NlpProblem t = transform_with_slacks(p);
  CHECK(t.n == 2);
  CHECK(t.m == 2);
  Vector x(2);
  x << 1.0, 0.0;
  CHECK(t.eval_F(x).norm() == 0.0);

  // Slack derivative only on its own column, equality row untouched.
  x << 0.5, -0.75;
  const Matrix J = t.eval_JF(x);
  CHECK(J(0, 1) == 0.0);
  CHECK(J(1, 1) == -1.5);
  CHECK(J(0, 0) == 1.0);
}

TEST_CASE("slack transform keeps the objective and outlives its source") {
  NlpProblem t;
  {
    InequalityProblem src = make_ineq_demo_source();
    t = transform_with_slacks(src);
  }
  std::mt19937 rng(3);
  const InequalityProblem ref = make_ineq_demo_source();
  for (int i = 0; i < 20; ++i) {
    const Vector x = testing::uniform_vector(rng, 3, -3, 3);
    CHECK(t.eval_f(x) == ref.eval_g(x.head(2)));
    CHECK(t.eval_grad_f(x)[2] == 0.0);
  }
}

TEST_CASE("KKT points of the slack problem have active inequalities") {
  // Transformed: min y s.t. 1 − y + s² = 0. Stationarity reads
  // 1 − λ = 0 and 2λs = 0, so the only KKT point is s = 0, y = 1.
  const NlpProblem t = transform_with_slacks(half_line());
  Vector x(2);
  x << 1.0, 0.0;
  const Vector lambda = Vector::Ones(1);
  const Vector stat = t.eval_grad_f(x) + t.eval_JF(x).transpose() * lambda;
  CHECK(stat.norm() == 0.0);
  CHECK(t.eval_F(x)[0] == 0.0);

  // A feasible point with s ≠ 0 admits no multiplier.
  x << 1.25, 0.5;
  CHECK(t.eval_F(x)[0] == 0.0);
  const Matrix J = t.eval_JF(x);
  const Vector g = t.eval_grad_f(x);
  const double best_lambda = -J.row(0).dot(g) / J.row(0).squaredNorm();
  CHECK((g + J.transpose() * Vector::Constant(1, best_lambda)).norm() > 0.1);
}

TEST_CASE("check_derivatives on exact derivatives") {
  const Vector x = Vector::Constant(1, 2.0);
  const auto rep = check_derivatives(scalar_problem(false), {x}, 1e-5);
  CHECK(rep.pass);
  CHECK(rep.sample_points == 1);
  CHECK(rep.max_grad_error < 1e-9);
  CHECK(rep.max_jac_error < 1e-9);
}

TEST_CASE("check_derivatives detects a wrong gradient") {
  const Vector x = Vector::Constant(1, 2.0);
  const auto rep = check_derivatives(scalar_problem(true), {x}, 1e-5);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_grad_error == doctest::Approx(0.4 / 4.4).epsilon(1e-6));
}

TEST_CASE("check_derivatives on sphere-linear at random points") {
  const NlpProblem p = make_sphere_linear();
  std::mt19937 rng(11);
  std::vector<Vector> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(testing::uniform_vector(rng, 2, -2, 2));
  const auto rep = check_derivatives(p, pts, 1e-5);
  CHECK(rep.pass);
  CHECK(rep.sample_points == 10);
  CHECK(rep.max_grad_error <= 1e-5);
  CHECK(rep.max_jac_error <= 1e-5);
}

TEST_CASE("check_derivatives pass flag matches the error maximum") {
  const NlpProblem p = make_cos_linear();
  std::mt19937 rng(5);
  std::vector<Vector> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(testing::uniform_vector(rng, 1, -3, 3));
  const auto rep = check_derivatives(p, pts, 1e-5);
  CHECK(rep.pass == (std::max(rep.max_grad_error, rep.max_jac_error) <= 1e-5));
  const auto strict = check_derivatives(p, pts, 1e-14);
  CHECK(strict.pass == (std::max(strict.max_grad_error, strict.max_jac_error) <= 1e-14));
}

TEST_CASE("check_derivatives aborts at a failing evaluator") {
  NlpProblem p = scalar_problem(false);
  p.eval_F = [](const Vector& x) {
    if (x[0] > 5) throw std::runtime_error("outside domain");
    return Vector::Constant(1, x[0] - 1.0);
  };
  const std::vector<Vector> pts{Vector::Constant(1, 0.0), Vector::Constant(1, 10.0),
                                Vector::Constant(1, 1.0)};
  const auto rep = check_derivatives(p, pts, 1e-5);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.failed_point.has_value());
  CHECK(*rep.failed_point == 1);
  CHECK_FALSE(rep.failure.empty());

  CHECK_THROWS_AS(check_derivatives(p, pts, 0.0), ConfigError);
}

TEST_CASE("analytic derivatives agree with an independent oracle") {
  std::mt19937 rng(17);
  for (const auto& name : default_registry().names()) {
    const NlpProblem p = default_registry().build(name);
    CAPTURE(name);
    for (int s = 0; s < 3; ++s) {
      const Vector x = testing::uniform_vector(rng, static_cast<Eigen::Index>(p.n), -1.5, 1.5);
      const Vector g = testing::fd_gradient(p.eval_f, x);
      const Matrix J = testing::fd_jacobian(p.eval_F, x, static_cast<Eigen::Index>(p.m));
      CHECK((p.eval_grad_f(x) - g).lpNorm<Eigen::Infinity>() <= 1e-7 * (1 + g.norm()));
      CHECK((p.eval_JF(x) - J).lpNorm<Eigen::Infinity>() <= 1e-7 * (1 + J.norm()));
    }
  }
}

TEST_CASE("evaluators are deterministic") {
  std::mt19937 rng(23);
  for (const auto& name : default_registry().names()) {
    const NlpProblem p = default_registry().build(name);
    const Vector x = testing::uniform_vector(rng, static_cast<Eigen::Index>(p.n), -1, 1);
    CHECK(p.eval_f(x) == p.eval_f(x));
    CHECK(p.eval_F(x) == p.eval_F(x));
    CHECK(p.eval_grad_f(x) == p.eval_grad_f(x));
    CHECK(p.eval_JF(x) == p.eval_JF(x));
  }
}

TEST_CASE("validate rejects inconsistent problems") {
  NlpProblem p = scalar_problem(false);
  CHECK_NOTHROW(p.validate());
  p.m = 2;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.m = 1;
  p.initial_point = Vector::Zero(3);
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.initial_point.resize(0);
  p.eval_JF = nullptr;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
