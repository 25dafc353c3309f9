#pragma once

#include <stdexcept>
#include <string>

namespace midex {

// Base of every error raised by the library. Callers that only want to
// distinguish "library refused the input" from everything else catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// prefcore
class DimensionError : public Error { using Error::Error; };
class SkewError : public Error { using Error::Error; };
class DiagonalError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class EmptySequence : public Error { using Error::Error; };

// choicemodel / midex / reduction
class ArmOutOfRange : public Error { using Error::Error; };
class BadM : public Error { using Error::Error; };
class InfeasibleParams : public Error { using Error::Error; };
class FloorViolation : public Error { using Error::Error; };
class IndexOutOfRange : public Error { using Error::Error; };

// adversaries
class BadSpec : public Error { using Error::Error; };

// config and output
class ParseError : public Error { using Error::Error; };

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error { using Error::Error; };

}  // namespace midex
