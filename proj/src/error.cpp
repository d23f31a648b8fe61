#include "pcs/error.hpp"

namespace pcs {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::RowCountMismatch: return "RowCountMismatch";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::DegenerateExponent: return "DegenerateExponent";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InsufficientStage1: return "InsufficientStage1";
    case ErrorCode::MissingVariable: return "MissingVariable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace pcs
