#pragma once

#include <stdexcept>
#include <string>

namespace foldprod {

enum class ErrorCode {
  NonPositiveArgument,
  TangentPole,
  DomainError,
  UnequalFactorCounts,
  NonPositiveFactorOnTail,
  UnbalancedUnsignedProduct,
  PrecisionUnreachable,
  InvalidG,
  UnbalancedSums,
  PoleArgument,
  ParseError,
  UsageError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::TangentPole: return "TangentPole";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnequalFactorCounts: return "UnequalFactorCounts";
    case ErrorCode::NonPositiveFactorOnTail: return "NonPositiveFactorOnTail";
    case ErrorCode::UnbalancedUnsignedProduct: return "UnbalancedUnsignedProduct";
    case ErrorCode::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorCode::InvalidG: return "InvalidG";
    case ErrorCode::UnbalancedSums: return "UnbalancedSums";
    case ErrorCode::PoleArgument: return "PoleArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the contract that
/// was violated; the message names the offending parameter.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace foldprod
