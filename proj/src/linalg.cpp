#include <lqp/linalg.hpp>

#include <Eigen/Cholesky>

namespace lqp {

Matrix assemble_normal_matrix(const Matrix& J, double rho, double beta) {
  const Eigen::Index n = J.cols();
  Matrix H(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      H(i, j) = rho * J.col(i).dot(J.col(j));
    }
    H(j, j) += beta;
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) H(j, i) = H(i, j);
  return H;
}

namespace {

bool try_factor(const Matrix& H, const Vector& g, Vector& d) {
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) return false;
  d = llt.solve(g);
  if (!d.allFinite()) return false;
  // A few refinement sweeps recover most of the accuracy lost to
  // ill-conditioning when β is tiny relative to ρ‖J‖².
  double res = (g - H * d).norm();
  for (int sweep = 0; sweep < 3 && res > 0.0; ++sweep) {
    const Vector candidate = d + llt.solve(Vector(g - H * d));
    const double cand_res = (g - H * candidate).norm();
    if (!(cand_res < res)) break;
    d = candidate;
    res = cand_res;
  }
  return true;
}

}  // namespace

Vector solve_spd(const Matrix& H, const Vector& g) {
  if (H.rows() != H.cols() || H.rows() != g.size())
    throw NotPositiveDefinite("solve_spd: dimension mismatch");
  Vector d;
  if (try_factor(H, g, d)) return d;

  const double n = static_cast<double>(H.rows());
  const double jitter = 1e-12 * H.trace() / n;
  if (jitter > 0.0) {
    Matrix shifted = H;
    shifted.diagonal().array() += jitter;
    if (try_factor(shifted, g, d)) return d;
  }
  throw NotPositiveDefinite("solve_spd: matrix is not positive definite");
}

}  // namespace lqp
