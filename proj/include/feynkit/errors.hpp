#pragma once

#include <stdexcept>

namespace feynkit {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Referential-integrity failure while assembling a diagram:
/// a dangling vertex reference or a duplicate id. The message names
/// the offending id.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Violated operation precondition: parity of external counts,
/// infeasible internal counts, a main-condition failure where the
/// result would be ill-defined, an exceeded enumeration guard, or
/// out-of-domain integral parameters.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace feynkit
