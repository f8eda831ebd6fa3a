#pragma once

#include <stdexcept>
#include <string>

namespace eta_riccati {

/// Argument outside the mathematical domain of an operation (a <= 0, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument that is in-domain but unsupported by the chosen configuration.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rounding in the forward-difference table exceeded the requested tolerance.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series or quadrature did not reach its tolerance within budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sign scan found no root of the curvature function in the search window.
class NoCrossingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eta_riccati
