#pragma once

#include <lqp/types.hpp>

namespace lqp {

/// Returns ρ·JᵀJ + β·I. Only the lower triangle is computed and then
/// mirrored, so the result is exactly symmetric.
Matrix assemble_normal_matrix(const Matrix& J, double rho, double beta);

/// Solves H·d = g for symmetric positive definite H by Cholesky.
///
/// A failed factorization is retried once with 1e-12·trace(H)/n added to the
/// diagonal; if that also fails NotPositiveDefinite is thrown.
Vector solve_spd(const Matrix& H, const Vector& g);

}  // namespace lqp
