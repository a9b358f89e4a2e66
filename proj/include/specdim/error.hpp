#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specdim {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied arguments that violate a precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class LengthError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonFiniteError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidSpecError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatchError : public ValidationError {
 public:
  DimensionMismatchError(const std::string& what, std::size_t expected, std::size_t actual)
      : ValidationError(what + ": expected dimension " + std::to_string(expected) + ", got " +
                        std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class EmptyInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DuplicateIdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A zero vector has no direction, so cosine distance is undefined for it.
class ZeroVectorError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnlabeledIdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Filesystem failures (cannot open, cannot write).
class IoError : public Error {
 public:
  using Error::Error;
};

// Content of a file does not follow the expected format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class MagicMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class VersionMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedFileError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Malformed text record; line numbers are 1-based.
class ParseError : public FormatError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : FormatError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace specdim
