#pragma once

#include <stdexcept>
#include <string>

namespace lcaid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed the configured element bound.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Arguments do not belong to the same group, arities differ, or a set is not
/// a subgroup.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidEndomorphism : public Error {
 public:
  using Error::Error;
};

/// Division by a (numerically) vanishing table entry.
class DivisionError : public Error {
 public:
  using Error::Error;
};

/// A lattice window has too little margin for the requested shifts.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// Hypotheses of a verifier (kernel conditions, nonvanishing) do not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class CannotConstruct : public Error {
 public:
  using Error::Error;
};

/// Malformed fixture text.
class FixtureError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcaid
