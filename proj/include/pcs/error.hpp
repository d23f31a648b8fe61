#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcs {

/// Stable, machine-readable failure categories. The names returned by
/// `error_code_name` are part of the CLI contract and must not change.
enum class ErrorCode {
  InvalidArgument,
  ConstantColumn,
  RowCountMismatch,
  IllConditioned,
  SingularGram,
  ZeroWeight,
  DegenerateExponent,
  OutOfRange,
  DegreeOutOfRange,
  NoConvergence,
  InsufficientStage1,
  MissingVariable,
  ParseError,
  InvalidConfig,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pcs
