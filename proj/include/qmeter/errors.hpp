#pragma once

#include <stdexcept>
#include <string>

namespace qmeter {

/// Argument outside the mathematical domain of an operation (negative time,
/// zero detuning, concurrence outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The closed form exists only for theta = 0; use the Fock oracle instead.
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigen-solver failure or a spectrum that violates a structural property
/// beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pointer states coincide (P -> 1); the Gram-Schmidt meter basis is undefined.
class DegenerateBasis : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientCutoff : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ReductionUnreliable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qmeter
