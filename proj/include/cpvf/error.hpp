#pragma once

#include <stdexcept>
#include <string>

namespace cpvf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class RootError : public Error {
 public:
  using Error::Error;
};

class TraceError : public Error {
 public:
  TraceError(const std::string& what, int ell = -1, double exit_angle = 0.0)
      : Error(what), ell(ell), exit_angle(exit_angle) {}
  int ell;
  double exit_angle;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class RealizationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Raised when a property that must hold for every valid input fails.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace cpvf
