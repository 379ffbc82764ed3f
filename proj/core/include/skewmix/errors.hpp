#ifndef SKEWMIX_ERRORS_HPP
#define SKEWMIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace skewmix {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition (order mismatch, bad range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConstruction : public Error {
 public:
  using Error::Error;
};

/// A tower height no longer fits in 64 bits.
class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

/// Stepping from the top of the simulated tower under the ERROR policy.
class TopOfTower : public Error {
 public:
  using Error::Error;
};

/// The point sits in a spacer, so it has no offset in the requested tower.
class NotInTower : public Error {
 public:
  using Error::Error;
};

/// A YPrefix is too short for the tau that has to be applied.
class HorizonTooSmall : public Error {
 public:
  using Error::Error;
};

/// Exact averaging would need more extension levels than allowed.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant check failed. Never thrown for bad user input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace skewmix

#endif  // SKEWMIX_ERRORS_HPP
