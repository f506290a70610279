#pragma once

#include <stdexcept>
#include <string>

namespace sdrkdg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

/// A non-physical state (e.g. negative density) was met at a quadrature or
/// trace point.  The message carries the location.
class StateError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the region where a formula or iteration is valid.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration the algorithms deliberately do not handle (e.g. vacuum).
class UnsupportedCase : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace sdrkdg
