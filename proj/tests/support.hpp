#pragma once

// Independent oracles shared by the unit and acceptance tests. Nothing here
// calls into the library's derivative or step code.

#include <lqp/problem.hpp>

#include <cmath>
#include <functional>
#include <random>

namespace lqp::testing {

// Fourth-order central difference of a scalar function along coordinate i.
inline double fd4(const std::function<double(const Vector&)>& fn, const Vector& x, Eigen::Index i,
                  double h = 1e-3) {
  Vector a = x, b = x, c = x, d = x;
  a[i] += 2 * h;
  b[i] += h;
  c[i] -= h;
  d[i] -= 2 * h;
  return (-fn(a) + 8 * fn(b) - 8 * fn(c) + fn(d)) / (12 * h);
}

inline Vector fd_gradient(const std::function<double(const Vector&)>& fn, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = fd4(fn, x, i);
  return g;
}

inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x,
                          Eigen::Index m) {
  Matrix J(m, x.size());
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index i = 0; i < x.size(); ++i)
      J(r, i) = fd4([&](const Vector& y) { return fn(y)[r]; }, x, i);
  return J;
}

// Root of a continuous g on [lo, hi] with a sign change.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Vector uniform_vector(std::mt19937& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (auto& e : v) e = u(rng);
  return v;
}

inline Matrix uniform_matrix(std::mt19937& rng, Eigen::Index r, Eigen::Index c, double lo,
                             double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix M(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) M(i, j) = u(rng);
  return M;
}

// f ≡ 0, F(x) = A x + 0.1·sin(B x) − c: a random smooth least-squares problem.
inline NlpProblem random_nls(std::mt19937& rng, std::size_t n, std::size_t m) {
  const Matrix A = uniform_matrix(rng, m, n, -1, 1) + Matrix::Identity(m, n) * 2.0;
  const Matrix B = uniform_matrix(rng, m, n, -1, 1);
  const Vector c = uniform_vector(rng, m, -1, 1);
  NlpProblem p;
  p.name = "random-nls";
  p.n = n;
  p.m = m;
  p.eval_f = [](const Vector&) { return 0.0; };
  p.eval_grad_f = [n](const Vector&) { return Vector::Zero(n).eval(); };
  p.eval_F = [A, B, c](const Vector& x) {
    return (A * x + 0.1 * (B * x).array().sin().matrix() - c).eval();
  };
  p.eval_JF = [A, B](const Vector& x) {
    return (A + 0.1 * ((B * x).array().cos().matrix().asDiagonal() * B)).eval();
  };
  p.initial_point = uniform_vector(rng, n, -1, 1);
  return p;
}

}  // namespace lqp::testing
