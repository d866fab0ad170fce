#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace defect_nls {

enum class ErrorKind {
  SingularMatrix,
  DimensionMismatch,
  NonFinite,
  ZeroVector,
  RealEigenvalue,
  DuplicateEigenvalue,
  DegenerateDressing,
  OverflowRange,
  UnsupportedSeed,
  ForbiddenEigenvalue,
  SingularDressing,
  NotDegreeOne,
  ComplexOmega,
  InvalidParameter,
  ZeroComponent,
  PeakNotFound,
  ParseError,
  SchemaViolation,
  InvariantViolation,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::RealEigenvalue: return "RealEigenvalue";
    case ErrorKind::DuplicateEigenvalue: return "DuplicateEigenvalue";
    case ErrorKind::DegenerateDressing: return "DegenerateDressing";
    case ErrorKind::OverflowRange: return "OverflowRange";
    case ErrorKind::UnsupportedSeed: return "UnsupportedSeed";
    case ErrorKind::ForbiddenEigenvalue: return "ForbiddenEigenvalue";
    case ErrorKind::SingularDressing: return "SingularDressing";
    case ErrorKind::NotDegreeOne: return "NotDegreeOne";
    case ErrorKind::ComplexOmega: return "ComplexOmega";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ZeroComponent: return "ZeroComponent";
    case ErrorKind::PeakNotFound: return "PeakNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorKind tags.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace defect_nls
