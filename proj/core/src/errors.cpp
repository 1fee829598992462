#include "cifcompare/errors.hpp"

namespace cifcompare {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::NonPositiveDuration: return "NonPositiveDuration";
    case ErrorKind::InvalidTime: return "InvalidTime";
    case ErrorKind::TiesPresent: return "TiesPresent";
    case ErrorKind::EmptyRiskSet: return "EmptyRiskSet";
    case ErrorKind::InvalidInterval: return "InvalidInterval";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InadmissibleWeight: return "InadmissibleWeight";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::MultiplierCountMismatch: return "MultiplierCountMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::MoreThanTwoGroups: return "MoreThanTwoGroups";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(ErrorKind::ConfigError, field + ": " + message), field_(std::move(field)) {}

}  // namespace cifcompare
