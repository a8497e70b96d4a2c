#pragma once

#include <lqp/types.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lqp {

using ScalarFn = std::function<double(const Vector&)>;
using VectorFn = std::function<Vector(const Vector&)>;
using MatrixFn = std::function<Matrix(const Vector&)>;

/// Analytic KKT point of the constrained problem, used only for testing and
/// reporting. Stationarity convention: ∇f(x*) + J_F(x*)ᵀλ* = 0.
struct ReferenceSolution {
  Vector x;
  double f = 0.0;
  Vector lambda;
};

/// Global smoothness constants on the region visited by the iterates:
///   ‖∇f(x) − ∇f(y)‖ ≤ L_f‖x − y‖,
///   ‖J_F(x) − J_F(y)‖ ≤ L_F‖x − y‖,
///   ‖J_F(x)‖ ≤ M_F.
struct SmoothnessConstants {
  double grad_lipschitz = 0.0;  // L_f
  double jac_lipschitz = 0.0;   // L_F
  double jac_bound = 0.0;       // M_F
};

/// min f(x) s.t. F(x) = 0 with x ∈ ℝⁿ and F: ℝⁿ → ℝᵐ.
///
/// Evaluators must be pure functions of x. The problem is immutable once
/// built and may be shared between threads.
struct NlpProblem {
  std::string name;
  std::size_t n = 0;
  std::size_t m = 0;

  ScalarFn eval_f;
  VectorFn eval_grad_f;
  VectorFn eval_F;
  MatrixFn eval_JF;

  /// Documented starting point; empty when the problem does not provide one.
  Vector initial_point;
  std::optional<ReferenceSolution> reference_solution;
  std::optional<SmoothnessConstants> known_constants;
  /// Exactness threshold of the quadratic penalty, when known analytically.
  /// The solver only uses it to warn when ρ < max{1, 3·threshold}.
  std::optional<double> penalty_threshold;

  /// Throws ConfigError when dimensions or evaluators are inconsistent.
  void validate() const;
};

/// min g(y) s.t. G(y) = 0, H(y) ≤ 0 with y ∈ ℝᵖ, G: ℝᵖ → ℝ^q, H: ℝᵖ → ℝʳ.
struct InequalityProblem {
  std::string name;
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t r = 0;

  ScalarFn eval_g;
  VectorFn eval_grad_g;
  VectorFn eval_G;   // may be empty when q == 0
  MatrixFn eval_JG;  // q×p
  VectorFn eval_H;
  MatrixFn eval_JH;  // r×p
};

/// Rewrites H(y) ≤ 0 as H(y) + s∘s = 0 with slack vector s ∈ ℝʳ.
/// The result has x = (y, s), n = p + r and m = q + r.
NlpProblem transform_with_slacks(const InequalityProblem& problem);

struct DerivativeCheckReport {
  double max_grad_error = 0.0;
  double max_jac_error = 0.0;
  std::size_t sample_points = 0;
  bool pass = false;
  /// Set when an evaluator failed; the check stops at that point.
  std::optional<std::size_t> failed_point;
  std::string failure;
};

/// Compares analytic first derivatives against central differences.
///
/// The step for coordinate i is h = ε^(1/3)·(1 + |x_i|). The error for each
/// component is |analytic − fd| / max(1, |analytic|, |fd|).
DerivativeCheckReport check_derivatives(const NlpProblem& problem,
                                        const std::vector<Vector>& points,
                                        double tol);

}  // namespace lqp
