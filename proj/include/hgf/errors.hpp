#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hgf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be processed (non-finite samples, bad shapes).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was not met by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The characteristic inverse was requested for data that has not been
/// certified convex.
class NotCertified : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// A truncated domain is too small for the requested analysis.
class DomainTooSmall : public Error {
 public:
  using Error::Error;
};

/// Scenario text failed to parse or validate.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

class NonIntegrableField : public Error {
 public:
  NonIntegrableField(double max_residual, double tolerance, std::size_t node);

  double max_residual() const { return max_residual_; }
  double tolerance() const { return tolerance_; }
  std::size_t node() const { return node_; }

 private:
  double max_residual_;
  double tolerance_;
  std::size_t node_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(double residual, int iterations);

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class SingularMap : public Error {
 public:
  using Error::Error;
};

}  // namespace hgf
