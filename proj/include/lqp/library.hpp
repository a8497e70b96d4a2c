#pragma once

#include <lqp/problem.hpp>

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lqp {

/// Builds a problem for an optional size parameter N; the entry picks its
/// own default when N is absent.
using ProblemBuilder = std::function<NlpProblem(std::optional<std::size_t> size)>;

struct RegistryEntry {
  std::string description;
  ProblemBuilder builder;
};

class ProblemRegistry {
 public:
  /// Throws ConfigError on a duplicate name.
  void add(const std::string& name, RegistryEntry entry);

  /// Throws UnknownProblem when `name` is not registered.
  NlpProblem build(const std::string& name, std::optional<std::size_t> size = {}) const;

  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  std::vector<std::string> names() const;
  const RegistryEntry& entry(const std::string& name) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, RegistryEntry> entries_;
};

/// Registry with every built-in problem.
const ProblemRegistry& default_registry();

// Individual generators, also usable without the registry.

/// min x₁ + x₂ s.t. x₁² + x₂² = 2.
NlpProblem make_sphere_linear();

/// min ½xᵀQx − pᵀx s.t. Ax = b, with the KKT point from a dense solve.
NlpProblem make_quad_affine(const Matrix& Q, const Vector& p, const Matrix& A, const Vector& b,
                            std::string name = "quad-affine");
/// Seeded random instance with n = N and m = max(1, N/2).
NlpProblem make_quad_affine(std::size_t N);

/// Discretized control chain: states u_0..u_N, controls v_0..v_{N−1} and
/// dynamics u_{t+1} = u_t + h(v_t + u_t v_t). n = 2N + 1, m = N.
NlpProblem make_dtoc_chain(std::size_t N);

/// Circle fit to N noisy points by orthogonal distance. n = 2N + 3, m = N.
NlpProblem make_orthreg(std::size_t N);

/// f ≡ 0, F_i(x) = x_i + ½sin(x_{i+1 mod N}) − c_i with a known root.
NlpProblem make_nls_null(std::size_t N);

/// min (y₁−2)² + (y₂−2)² s.t. y₁ = y₂, y₁ + y₂ ≤ 2, before the slack transform.
InequalityProblem make_ineq_demo_source();
NlpProblem make_ineq_demo();

/// min cos(x) s.t. x − 1 = 0.
NlpProblem make_cos_linear();

}  // namespace lqp
