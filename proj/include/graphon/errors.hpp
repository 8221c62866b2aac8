#pragma once

#include <stdexcept>
#include <string>

namespace graphon {

// Base for every error raised by the library. The CLI maps these to exit
// status 1 and prints what() verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (logit at 0/1,
// probabilities outside (0,1) handed to a solver, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Parameters that make a quantity undefined: degenerate logits in the
// regime test, zero K1/K3 in the eta ratio, zero density slope.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// A value outside the admissible interval (delta outside [delta_min, 0],
// density outside the family's achievable range, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

// A point that sits on (or too close to) a regime boundary for the
// requested operation.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphon
