#pragma once

#include <stdexcept>
#include <string>

namespace wlens {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: dangling ids, partial tables, shape mismatches.
/// Distinct from a law violation, which is reported rather than thrown.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A value that breaks a type invariant (masses not summing to one, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Middle marginals of two couplings do not agree.
class CompositionError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The brute-force oracle refuses instances beyond its size limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// No witness exists for a requested construction.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// First marginal of a coupling does not match the pushforward of the anchor.
class LiftingError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace wlens
