#pragma once

#include <stdexcept>
#include <string>

namespace gresilience {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input value or configuration. `field()` names the offending field
// (dotted path for scenario files, e.g. "classifier.eps_known_mean").
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A value outside its mathematical domain (probability > 1, eps not in (0,1)).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// 2x2 game whose equilibrium denominators vanish.
class DegenerateGameError : public Error {
 public:
  using Error::Error;
};

// An invariant the library itself guarantees was broken.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Event log that is not well formed (unordered timestamps, bad records).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace gresilience
