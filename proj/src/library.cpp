#include <lqp/library.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <random>

namespace lqp {

void ProblemRegistry::add(const std::string& name, RegistryEntry entry) {
  if (!entries_.emplace(name, std::move(entry)).second)
    throw ConfigError("problem '" + name + "' is already registered");
}

NlpProblem ProblemRegistry::build(const std::string& name, std::optional<std::size_t> size) const {
  return entry(name).builder(size);
}

const RegistryEntry& ProblemRegistry::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw UnknownProblem("unknown problem '" + name + "'");
  return it->second;
}

std::vector<std::string> ProblemRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

NlpProblem make_sphere_linear() {
  NlpProblem p;
  p.name = "sphere-linear";
  p.n = 2;
  p.m = 1;
  p.eval_f = [](const Vector& x) { return x(0) + x(1); };
  p.eval_grad_f = [](const Vector&) { return Vector(Vector::Ones(2)); };
  p.eval_F = [](const Vector& x) {
    Vector F(1);
    F(0) = x.squaredNorm() - 2.0;
    return F;
  };
  p.eval_JF = [](const Vector& x) {
    Matrix J(1, 2);
    J << 2.0 * x(0), 2.0 * x(1);
    return J;
  };
  p.initial_point = Vector(2);
  p.initial_point << 2.0, 0.0;
  ReferenceSolution ref;
  ref.x = Vector::Constant(2, -1.0);
  ref.f = -2.0;
  ref.lambda = Vector::Constant(1, 0.5);
  p.reference_solution = ref;
  return p;
}

NlpProblem make_quad_affine(const Matrix& Q, const Vector& p_vec, const Matrix& A,
                            const Vector& b, std::string name) {
  const Eigen::Index n = Q.rows();
  const Eigen::Index m = A.rows();
  if (Q.cols() != n || p_vec.size() != n || A.cols() != n || b.size() != m)
    throw ConfigError("make_quad_affine: inconsistent dimensions");

  NlpProblem p;
  p.name = std::move(name);
  p.n = static_cast<std::size_t>(n);
  p.m = static_cast<std::size_t>(m);
  p.eval_f = [Q, p_vec](const Vector& x) { return 0.5 * x.dot(Q * x) - p_vec.dot(x); };
  p.eval_grad_f = [Q, p_vec](const Vector& x) { return Vector(Q * x - p_vec); };
  p.eval_F = [A, b](const Vector& x) { return Vector(A * x - b); };
  p.eval_JF = [A](const Vector&) { return A; };
  p.initial_point = Vector::Zero(n);

  // [Q Aᵀ; A 0][x; λ] = [p; b]
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = Q;
  K.topRightCorner(n, m) = A.transpose();
  K.bottomLeftCorner(m, n) = A;
  Vector rhs(n + m);
  rhs << p_vec, b;
  const Vector sol = K.fullPivLu().solve(rhs);
  ReferenceSolution ref;
  ref.x = sol.head(n);
  ref.lambda = sol.tail(m);
  ref.f = 0.5 * ref.x.dot(Q * ref.x) - p_vec.dot(ref.x);
  p.reference_solution = ref;

  SmoothnessConstants c;
  c.grad_lipschitz = Eigen::SelfAdjointEigenSolver<Matrix>(Q).eigenvalues().cwiseAbs().maxCoeff();
  c.jac_lipschitz = 0.0;
  c.jac_bound = Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
  p.known_constants = c;
  return p;
}

NlpProblem make_quad_affine(std::size_t N) {
  if (N < 2) throw ConfigError("quad-affine needs N >= 2");
  const auto n = static_cast<Eigen::Index>(N);
  const auto m = std::max<Eigen::Index>(1, n / 2);
  std::mt19937 rng(20240611u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto fill = [&](Matrix& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, j) = unit(rng);
  };
  Matrix B(n, n), A(m, n);
  fill(B);
  fill(A);
  Matrix Q = B.transpose() * B / static_cast<double>(n);
  Q.diagonal().array() += 1.0;
  Vector p_vec(n), b(m);
  for (Eigen::Index i = 0; i < n; ++i) p_vec(i) = unit(rng);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = 0.3 * unit(rng);
  return make_quad_affine(Q, p_vec, A, b);
}

NlpProblem make_dtoc_chain(std::size_t N) {
  if (N < 1) throw ConfigError("dtoc-chain needs N >= 1");
  const auto T = static_cast<Eigen::Index>(N);
  const double h = 1.0 / static_cast<double>(N);
  static constexpr double control_weight = 0.1;
  Vector target(T + 1);
  for (Eigen::Index t = 0; t <= T; ++t) target(t) = static_cast<double>(t) * h;

  // x = (u_0..u_T, v_0..v_{T−1})
  NlpProblem p;
  p.name = "dtoc-chain";
  p.n = 2 * N + 1;
  p.m = N;
  p.eval_f = [T, target](const Vector& x) {
    return 0.5 * (x.head(T + 1) - target).squaredNorm() +
           0.5 * control_weight * x.tail(T).squaredNorm();
  };
  p.eval_grad_f = [T, target](const Vector& x) {
    Vector g(2 * T + 1);
    g.head(T + 1) = x.head(T + 1) - target;
    g.tail(T) = control_weight * x.tail(T);
    return g;
  };
  p.eval_F = [T, h](const Vector& x) {
    Vector F(T);
    for (Eigen::Index t = 0; t < T; ++t) {
      const double u = x(t), v = x(T + 1 + t);
      F(t) = x(t + 1) - u - h * (v + u * v);
    }
    return F;
  };
  p.eval_JF = [T, h](const Vector& x) {
    Matrix J = Matrix::Zero(T, 2 * T + 1);
    for (Eigen::Index t = 0; t < T; ++t) {
      const double u = x(t), v = x(T + 1 + t);
      J(t, t + 1) = 1.0;
      J(t, t) = -1.0 - h * v;
      J(t, T + 1 + t) = -h * (1.0 + u);
    }
    return J;
  };
  p.initial_point = Vector::Zero(2 * T + 1);
  return p;
}

NlpProblem make_orthreg(std::size_t N) {
  if (N < 3) throw ConfigError("orthreg needs N >= 3");
  const auto K = static_cast<Eigen::Index>(N);
  const Eigen::Vector2d center(1.0, -0.5);
  constexpr double radius = 2.0;

  std::mt19937 rng(7u);
  std::normal_distribution<double> noise(0.0, 0.05);
  Matrix z(2, K);
  for (Eigen::Index i = 0; i < K; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(K);
    z(0, i) = center(0) + radius * std::cos(theta) + noise(rng);
    z(1, i) = center(1) + radius * std::sin(theta) + noise(rng);
  }

  // x = (w_1..w_N, c, r), each w_i ∈ ℝ²
  NlpProblem p;
  p.name = "orthreg";
  p.n = 2 * N + 3;
  p.m = N;
  p.eval_f = [K, z](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < K; ++i) s += (z.col(i) - x.segment<2>(2 * i)).squaredNorm();
    return s;
  };
  p.eval_grad_f = [K, z](const Vector& x) {
    Vector g = Vector::Zero(2 * K + 3);
    for (Eigen::Index i = 0; i < K; ++i)
      g.segment<2>(2 * i) = 2.0 * (x.segment<2>(2 * i) - z.col(i));
    return g;
  };
  p.eval_F = [K](const Vector& x) {
    const Eigen::Vector2d c = x.segment<2>(2 * K);
    const double r = x(2 * K + 2);
    Vector F(K);
    for (Eigen::Index i = 0; i < K; ++i) F(i) = (x.segment<2>(2 * i) - c).squaredNorm() - r * r;
    return F;
  };
  p.eval_JF = [K](const Vector& x) {
    const Eigen::Vector2d c = x.segment<2>(2 * K);
    const double r = x(2 * K + 2);
    Matrix J = Matrix::Zero(K, 2 * K + 3);
    for (Eigen::Index i = 0; i < K; ++i) {
      const Eigen::Vector2d d = x.segment<2>(2 * i) - c;
      J(i, 2 * i) = 2.0 * d(0);
      J(i, 2 * i + 1) = 2.0 * d(1);
      J(i, 2 * K) = -2.0 * d(0);
      J(i, 2 * K + 1) = -2.0 * d(1);
      J(i, 2 * K + 2) = -2.0 * r;
    }
    return J;
  };

  // Start on the circle through the centroid at the mean distance, with each
  // w_i the radial projection of z_i.
  const Eigen::Vector2d c0 = z.rowwise().mean();
  double r0 = 0.0;
  for (Eigen::Index i = 0; i < K; ++i) r0 += (z.col(i) - c0).norm();
  r0 /= static_cast<double>(K);
  Vector x0(2 * K + 3);
  for (Eigen::Index i = 0; i < K; ++i) {
    const Eigen::Vector2d d = z.col(i) - c0;
    x0.segment<2>(2 * i) = c0 + r0 * d / d.norm();
  }
  x0.segment<2>(2 * K) = c0;
  x0(2 * K + 2) = r0;
  p.initial_point = x0;
  return p;
}

NlpProblem make_nls_null(std::size_t N) {
  if (N < 2) throw ConfigError("nls-null needs N >= 2");
  const auto n = static_cast<Eigen::Index>(N);
  Vector root(n);
  for (Eigen::Index i = 0; i < n; ++i) root(i) = 0.5 * std::cos(static_cast<double>(i));
  Vector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = root(i) + 0.5 * std::sin(root((i + 1) % n));

  NlpProblem p;
  p.name = "nls-null";
  p.n = N;
  p.m = N;
  p.eval_f = [](const Vector&) { return 0.0; };
  p.eval_grad_f = [n](const Vector&) { return Vector(Vector::Zero(n)); };
  p.eval_F = [n, c](const Vector& x) {
    Vector F(n);
    for (Eigen::Index i = 0; i < n; ++i) F(i) = x(i) + 0.5 * std::sin(x((i + 1) % n)) - c(i);
    return F;
  };
  p.eval_JF = [n](const Vector& x) {
    Matrix J = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index j = (i + 1) % n;
      J(i, j) += 0.5 * std::cos(x(j));
    }
    return J;
  };
  p.initial_point = Vector::Zero(n);
  ReferenceSolution ref;
  ref.x = root;
  ref.f = 0.0;
  ref.lambda = Vector::Zero(n);
  p.reference_solution = ref;
  // J = I + ½·diag(cos)·P with P a cyclic shift, so ‖J‖ ≤ 3/2 and
  // ‖J(x) − J(y)‖ ≤ ½‖x − y‖.
  p.known_constants = SmoothnessConstants{0.0, 0.5, 1.5};
  return p;
}

InequalityProblem make_ineq_demo_source() {
  InequalityProblem p;
  p.name = "ineq-demo";
  p.p = 2;
  p.q = 1;
  p.r = 1;
  p.eval_g = [](const Vector& y) { return (y(0) - 2.0) * (y(0) - 2.0) + (y(1) - 2.0) * (y(1) - 2.0); };
  p.eval_grad_g = [](const Vector& y) {
    Vector g(2);
    g << 2.0 * (y(0) - 2.0), 2.0 * (y(1) - 2.0);
    return g;
  };
  p.eval_G = [](const Vector& y) { return Vector(Vector::Constant(1, y(0) - y(1))); };
  p.eval_JG = [](const Vector&) {
    Matrix J(1, 2);
    J << 1.0, -1.0;
    return J;
  };
  p.eval_H = [](const Vector& y) { return Vector(Vector::Constant(1, y(0) + y(1) - 2.0)); };
  p.eval_JH = [](const Vector&) {
    Matrix J(1, 2);
    J << 1.0, 1.0;
    return J;
  };
  return p;
}

NlpProblem make_ineq_demo() {
  NlpProblem p = transform_with_slacks(make_ineq_demo_source());
  p.initial_point = Vector(3);
  p.initial_point << 0.0, 0.0, 1.0;
  ReferenceSolution ref;
  ref.x = Vector(3);
  ref.x << 1.0, 1.0, 0.0;
  ref.f = 2.0;
  ref.lambda = Vector(2);
  ref.lambda << 0.0, 2.0;
  p.reference_solution = ref;
  return p;
}

NlpProblem make_cos_linear() {
  NlpProblem p;
  p.name = "cos-linear";
  p.n = 1;
  p.m = 1;
  p.eval_f = [](const Vector& x) { return std::cos(x(0)); };
  p.eval_grad_f = [](const Vector& x) { return Vector(Vector::Constant(1, -std::sin(x(0)))); };
  p.eval_F = [](const Vector& x) { return Vector(Vector::Constant(1, x(0) - 1.0)); };
  p.eval_JF = [](const Vector&) { return Matrix(Matrix::Ones(1, 1)); };
  p.initial_point = Vector::Zero(1);
  ReferenceSolution ref;
  ref.x = Vector::Ones(1);
  ref.f = std::cos(1.0);
  ref.lambda = Vector::Constant(1, std::sin(1.0));
  p.reference_solution = ref;
  p.known_constants = SmoothnessConstants{1.0, 0.0, 1.0};
  return p;
}

namespace {

ProblemRegistry make_default_registry() {
  ProblemRegistry reg;
  reg.add("sphere-linear", {"min x1+x2 s.t. |x|^2 = 2", [](auto) { return make_sphere_linear(); }});
  reg.add("quad-affine", {"convex quadratic with affine equalities (N, default 4)",
                          [](auto N) { return make_quad_affine(N.value_or(4)); }});
  reg.add("dtoc-chain", {"discretized control chain with bilinear dynamics (N, default 10)",
                         [](auto N) { return make_dtoc_chain(N.value_or(10)); }});
  reg.add("orthreg", {"orthogonal circle regression (N points, default 10)",
                      [](auto N) { return make_orthreg(N.value_or(10)); }});
  reg.add("nls-null", {"zero objective, coupled sine residual (N, default 6)",
                       [](auto N) { return make_nls_null(N.value_or(6)); }});
  reg.add("ineq-demo", {"inequality-constrained quadratic routed through slacks",
                        [](auto) { return make_ineq_demo(); }});
  reg.add("cos-linear", {"min cos(x) s.t. x = 1", [](auto) { return make_cos_linear(); }});
  return reg;
}

}  // namespace

const ProblemRegistry& default_registry() {
  static const ProblemRegistry registry = make_default_registry();
  return registry;
}

}  // namespace lqp
