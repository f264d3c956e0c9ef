#ifndef PSTAT_ERRORS_HPP_
#define PSTAT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pstat {

// Base of every error the library throws. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, missing columns, unknown attribute names.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; row is 1-based and counts the header as row 1.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

// A value outside its documented domain, e.g. a score above 1.
class RangeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(std::size_t column, const std::string& column_name)
      : Error("design matrix is rank deficient: column " +
              std::to_string(column) +
              (column_name.empty() ? std::string{} : " (" + column_name + ")") +
              " is linearly dependent on earlier columns"),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Residual mean square is zero, so F statistics are undefined.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class InsufficientNeighborsError : public Error {
 public:
  using Error::Error;
};

// HTTP failure after the retry budget is exhausted.
class TransportError : public Error {
 public:
  TransportError(int status, const std::string& what)
      : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// Response arrived but does not have the expected shape.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace pstat

#endif  // PSTAT_ERRORS_HPP_
