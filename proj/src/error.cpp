#include "dsl/error.hpp"

namespace dsl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicatePair: return "DuplicatePair";
    case ErrorCode::DeduciblePair: return "DeduciblePair";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyCandidates: return "EmptyCandidates";
    case ErrorCode::PendingQueryExists: return "PendingQueryExists";
    case ErrorCode::NoPendingQuery: return "NoPendingQuery";
    case ErrorCode::SessionDone: return "SessionDone";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::MissingLabels: return "MissingLabels";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dsl
