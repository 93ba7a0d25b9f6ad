#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsl {

enum class ErrorCode {
  DuplicatePair,
  DeduciblePair,
  DimensionMismatch,
  EmptyCandidates,
  PendingQueryExists,
  NoPendingQuery,
  SessionDone,
  LengthMismatch,
  EmptyTrace,
  MissingLabels,
  ParseError,
  NonFiniteValue,
  EmptyFile,
  InvalidSpec,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dsl
