#pragma once

#include <stdexcept>
#include <string>

namespace copulim {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index label or subset outside the admissible set, or a shape mismatch.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Missing or incompatible inputs (marginals, grids, perturbations).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Two representations that ought to describe the same measure disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// A structural invariant of a value type does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The request falls in a case where the theory gives no unique answer.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace copulim
