#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhb {

enum class ErrorKind {
  DivisionByZero,
  DimensionMismatch,
  NotInBall,
  Singular,
  NotInGroup,
  DegenerateGeodesic,
  InvalidProfile,
  EmptyData,
  InvalidInput,
  NotConverged,
  EmptyRegion,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotInBall: return "NotInBall";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::DegenerateGeodesic: return "DegenerateGeodesic";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind; the
/// message starts with the kind name so CLI output can be grepped.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qhb
