#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace lqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an evaluator returns a non-finite value or a wrongly sized result.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by solve_spd when the matrix cannot be factored even after jitter.
class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid configuration values or violated call preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingConstants : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownProblem : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace lqp
