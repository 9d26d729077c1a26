#pragma once

#include <stdexcept>
#include <string>

namespace mlebound {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative routine (quadrature, root finder) ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two algebraically equivalent evaluations disagreed.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random variate generation gave up (rejection cap reached).
class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlebound
