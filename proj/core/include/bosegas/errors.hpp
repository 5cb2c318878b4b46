#pragma once

#include <stdexcept>
#include <string>

namespace bosegas {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or validity condition of a computation was violated.
/// The message names the violated condition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace bosegas
