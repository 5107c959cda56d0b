#pragma once

#include <stdexcept>
#include <string>

namespace corrard {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot was non-positive or below the relative threshold.
class NotSPD : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class SeriesTooShort : public Error {
 public:
  using Error::Error;
};

class NonPositiveBandwidth : public Error {
 public:
  using Error::Error;
};

class BadGrid : public Error {
 public:
  using Error::Error;
};

class BadConfig : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

class EmptyRelevantSet : public Error {
 public:
  using Error::Error;
};

class AllZeroWeights : public Error {
 public:
  using Error::Error;
};

class KTooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (CSV, model file). Carries an optional 1-based
/// line/column position for diagnostics.
class InputError : public Error {
 public:
  InputError(const std::string& what, long line = 0, long column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  long line() const noexcept { return line_; }
  long column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, long line, long column) {
    if (line <= 0) return what;
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }

  long line_;
  long column_;
};

}  // namespace corrard
