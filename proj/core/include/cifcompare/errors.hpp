#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cifcompare {

enum class ErrorKind {
  EmptySample,
  NonPositiveDuration,
  InvalidTime,
  TiesPresent,
  EmptyRiskSet,
  InvalidInterval,
  GridMismatch,
  InadmissibleWeight,
  DegenerateVariance,
  MultiplierCountMismatch,
  InvalidArgument,
  FileNotFound,
  ParseError,
  UnknownColumn,
  MoreThanTwoGroups,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; `kind()` distinguishes failure modes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised while reading tabular input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Raised for invalid configuration; carries the offending field name.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace cifcompare
