#include <lqp/library.hpp>
#include <lqp/solver.hpp>

#include "support.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <random>
#include <set>

using namespace lqp;

TEST_CASE("default registry contents") {
  const auto& reg = default_registry();
  const auto names = reg.names();
  CHECK(names.size() >= 6);
  for (const char* required :
       {"sphere-linear", "quad-affine", "dtoc-chain", "orthreg", "nls-null", "ineq-demo"})
    CHECK(reg.contains(required));
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  for (const auto& name : names) {
    CAPTURE(name);
    const NlpProblem p = reg.build(name);
    CHECK_NOTHROW(p.validate());
    CHECK(static_cast<std::size_t>(p.initial_point.size()) == p.n);
    CHECK(p.name == name);
  }
  CHECK_THROWS_AS(reg.build("no-such-problem"), UnknownProblem);
}

TEST_CASE("registry rejects duplicates") {
  ProblemRegistry reg;
  reg.add("a", {"first", [](std::optional<std::size_t>) { return make_sphere_linear(); }});
  CHECK(reg.size() == 1);
  CHECK_THROWS_AS(
      reg.add("a", {"again", [](std::optional<std::size_t>) { return make_sphere_linear(); }}),
      ConfigError);
  CHECK(reg.entry("a").description == "first");
}

TEST_CASE("sphere-linear data") {
  const NlpProblem p = default_registry().build("sphere-linear");
  CHECK(p.n == 2);
  CHECK(p.m == 1);
  REQUIRE(p.reference_solution);
  CHECK(p.reference_solution->f == -2.0);
  CHECK(p.eval_f(p.reference_solution->x) == -2.0);
  CHECK(p.reference_solution->lambda[0] == 0.5);
}

TEST_CASE("dtoc-chain sizes") {
  const NlpProblem p = default_registry().build("dtoc-chain", 10);
  CHECK(p.n == 21);
  CHECK(p.m == 10);
  const NlpProblem q = make_dtoc_chain(3);
  CHECK(q.n == 7);
  CHECK(q.m == 3);
}

TEST_CASE("quad-affine KKT point") {
  const Matrix Q = Matrix::Identity(2, 2);
  const Vector p = Vector::Zero(2);
  const Matrix A = Matrix::Ones(1, 2);
  const Vector b = Vector::Constant(1, 2.0);
  const NlpProblem q = make_quad_affine(Q, p, A, b);
  REQUIRE(q.reference_solution);
  CHECK(q.reference_solution->x[0] == doctest::Approx(1.0));
  CHECK(q.reference_solution->x[1] == doctest::Approx(1.0));
  CHECK(q.reference_solution->lambda[0] == doctest::Approx(-1.0));
  CHECK(q.reference_solution->f == doctest::Approx(1.0));
}

TEST_CASE("random quad-affine matches a dense KKT solve") {
  for (std::size_t N : {2u, 4u, 7u}) {
    const NlpProblem q = make_quad_affine(N);
    REQUIRE(q.reference_solution);
    const auto n = static_cast<Eigen::Index>(q.n), m = static_cast<Eigen::Index>(q.m);
    // Recover the data from the evaluators: f is quadratic, F affine.
    const Matrix A = q.eval_JF(Vector::Zero(n));
    const Vector b = -q.eval_F(Vector::Zero(n));
    const Vector pvec = -q.eval_grad_f(Vector::Zero(n));
    Matrix Q(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      Q.col(i) = q.eval_grad_f(Vector::Unit(n, i)) + pvec;
    Matrix K = Matrix::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = Q;
    K.topRightCorner(n, m) = A.transpose();
    K.bottomLeftCorner(m, n) = A;
    Vector rhs(n + m);
    rhs << pvec, b;
    const Vector sol = K.partialPivLu().solve(rhs);
    CHECK((sol.head(n) - q.reference_solution->x).norm() <= 1e-10);
    CHECK((sol.tail(m) - q.reference_solution->lambda).norm() <= 1e-10);
  }
}

TEST_CASE("reference solutions are KKT points") {
  for (const auto& name : default_registry().names()) {
    const NlpProblem p = default_registry().build(name);
    if (!p.reference_solution) continue;
    CAPTURE(name);
    const auto& ref = *p.reference_solution;
    const KktResidual r = kkt_residuals(p, ref.x, ref.lambda);
    CHECK(r.stationarity <= 1e-8);
    CHECK(r.feasibility <= 1e-10);
    CHECK(p.eval_f(ref.x) == doctest::Approx(ref.f).epsilon(1e-12));
  }
}

TEST_CASE("documented starting points are nearly feasible") {
  for (const char* name : {"dtoc-chain", "orthreg"}) {
    const NlpProblem p = default_registry().build(name);
    CAPTURE(name);
    CHECK(p.eval_F(p.initial_point).norm() <= 1.0);
  }
}

TEST_CASE("every problem passes the derivative check") {
  std::mt19937 rng(61);
  for (const auto& name : default_registry().names()) {
    const NlpProblem p = default_registry().build(name);
    CAPTURE(name);
    std::vector<Vector> pts;
    for (int i = 0; i < 10; ++i)
      pts.push_back(testing::uniform_vector(rng, static_cast<Eigen::Index>(p.n), -2, 2));
    CHECK(check_derivatives(p, pts, 1e-5).pass);
  }
}

TEST_CASE("generators are deterministic") {
  const NlpProblem a = make_orthreg(8), b = make_orthreg(8);
  CHECK(a.initial_point == b.initial_point);
  const NlpProblem c = make_quad_affine(5), d = make_quad_affine(5);
  CHECK(c.reference_solution->x == d.reference_solution->x);
}

TEST_CASE("size parameters are validated") {
  CHECK_THROWS_AS(make_dtoc_chain(0), ConfigError);
  CHECK_THROWS_AS(make_orthreg(2), ConfigError);
  CHECK_THROWS_AS(make_nls_null(1), ConfigError);
  CHECK_THROWS_AS(make_quad_affine(1), ConfigError);
}
