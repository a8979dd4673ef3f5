#pragma once

#include <stdexcept>

namespace fiskit {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A membership-function or grid parameter violates its precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A crisp input lies outside its variable's universe of discourse.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A referenced variable or term name does not resolve.
class UnknownNameError : public Error {
 public:
  using Error::Error;
};

/// A rule base or model violates a structural invariant.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Every rule fired at exactly zero; there is nothing to average or defuzzify.
class ZeroActivationError : public Error {
 public:
  using Error::Error;
};

/// An aggregated set carries no positive grade.
class EmptySetError : public Error {
 public:
  using Error::Error;
};

/// An explicit inference relation would exceed the entry budget.
class RelationSizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace fiskit
