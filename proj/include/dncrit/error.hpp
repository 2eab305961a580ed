#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dncrit {

enum class ErrorCode {
  Malformed,
  NotSymmetric,
  NoConvergence,
  NegativeEigenvalue,
  ZeroToNegativePower,
  NotIrreducible,
  NotDn,
  IndexOutOfRange,
  DimensionTooLarge,
  DimensionTooSmall,
  InvalidW,
  BadRank,
  TooManyEigenvalues,
  RepeatedTopEigenvalue,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::ZeroToNegativePower: return "ZeroToNegativePower";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotDn: return "NotDn";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::InvalidW: return "InvalidW";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::TooManyEigenvalues: return "TooManyEigenvalues";
    case ErrorCode::RepeatedTopEigenvalue: return "RepeatedTopEigenvalue";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dncrit
