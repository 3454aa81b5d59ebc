#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Caller broke a documented precondition (negative index, bad parameter range).
class contract_violation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested functional is not defined for this measure/distribution kind.
class unsupported_functional : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point too close to the unit circle or to a kernel singularity.
class boundary_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimension or iteration cap exceeded before any work was done.
class resource_limit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Series, quadrature or Jacobi sweep did not reach its tolerance.
/// Carries whatever was computed and the accuracy that was reached.
class numerical_failure : public std::runtime_error {
 public:
  numerical_failure(const std::string& what, double partial_value, double achieved)
      : std::runtime_error(what), partial_value_(partial_value), achieved_(achieved) {}

  double partial_value() const noexcept { return partial_value_; }
  double achieved_accuracy() const noexcept { return achieved_; }

 private:
  double partial_value_;
  double achieved_;
};

/// The finiteness integral int (1-|w|^2)^{-2k-2} d|mu| diverges.
class not_trace_class : public std::runtime_error {
 public:
  not_trace_class(const std::string& what, double divergence_exponent)
      : std::runtime_error(what), exponent_(divergence_exponent) {}

  /// Power of (1-t) at t -> 1 that fails integrability.
  double divergence_exponent() const noexcept { return exponent_; }

 private:
  double exponent_;
};

/// Least-squares window contains zero or underflowed singular values.
class window_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bergman
