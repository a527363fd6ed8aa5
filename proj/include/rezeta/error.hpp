#pragma once

#include <stdexcept>
#include <string>

namespace rezeta {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at (or too close to) the pole of zeta at s = 1.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, std::string offending)
      : DomainError(what + " (input " + offending + ")"), input_(std::move(offending)) {}

  const std::string& input() const noexcept { return input_; }

 private:
  std::string input_;
};

/// Request beyond a configured maximum (Bernoulli index, |Im s|, digits, ...).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Requested accuracy is not reachable at the given working precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Endpoints of a root search do not bracket a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An evaluator returned a non-finite value.
class EvaluatorError : public Error {
 public:
  using Error::Error;
};

/// A self-check that should never fail did.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rezeta
