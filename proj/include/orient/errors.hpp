#pragma once

#include <stdexcept>
#include <string>

namespace orient {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands were built over different variable tables.
class TableMismatch : public Error {
 public:
  using Error::Error;
};

/// A monomial lies outside the truncation profile of the series queried.
class OutOfProfile : public Error {
 public:
  using Error::Error;
};

/// Precondition violated by caller-supplied data (bad order, bad rank, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The equivariant truncation is too coarse to decide an equality, even
/// after raising the cap up to the configured ceiling.
class InsufficientTruncation : public Error {
 public:
  using Error::Error;
};

/// Direct integration was requested for a space or theory without a table.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// An internal self-check failed. Always a bug in the kernel.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace orient
