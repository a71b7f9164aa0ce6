#pragma once

#include <stdexcept>
#include <string>

namespace dqo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The kernel is singular (focal time) or the requested time lies outside
// the validity window of the propagator.
class CausticError : public Error {
 public:
  using Error::Error;
};

// mu' vanishes inside a quadrature range that divides by it.
class DerivativeZeroError : public Error {
 public:
  using Error::Error;
};

class StepSizeError : public Error {
 public:
  StepSizeError(const std::string& what, double error_rate)
      : Error(what), error_rate_(error_rate) {}
  double error_rate() const { return error_rate_; }

 private:
  double error_rate_;
};

// The wavefunction does not decay at the grid edges.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class AliasingError : public Error {
 public:
  using Error::Error;
};

// Too few basis functions to represent a state (Parseval defect too large).
class InsufficientBasisError : public Error {
 public:
  InsufficientBasisError(const std::string& what, double defect)
      : Error(what), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

}  // namespace dqo
