#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyref {

enum class ErrorKind {
  Usage,        // bad argument, unknown label, malformed config
  Contract,     // precondition on a value violated (e.g. non-Hermitian input)
  Domain,       // argument outside the mathematical domain
  Numeric,      // quadrature did not converge, non-finite integrand
  Unsupported,  // valid input the requested operation does not handle
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an integral misses its tolerance. Carries whatever the
/// integrator had accumulated so callers can report it.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double partial_value,
               double error_estimate)
      : Error(ErrorKind::Numeric, what),
        partial_value_(partial_value),
        error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace fuzzyref
