#include "qcsync/errors.hpp"

namespace qcsync {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RefractionOutOfRange: return "RefractionOutOfRange";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::DelayExceedsBudget: return "DelayExceedsBudget";
    case ErrorCode::NotSynchronized: return "NotSynchronized";
    case ErrorCode::LengthUnderflow: return "LengthUnderflow";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::PoolTooLarge: return "PoolTooLarge";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

ErrorCode error_code_from_string(std::string_view name) {
  for (ErrorCode code :
       {ErrorCode::RefractionOutOfRange, ErrorCode::NonPositiveTime,
        ErrorCode::DelayExceedsBudget, ErrorCode::NotSynchronized, ErrorCode::LengthUnderflow,
        ErrorCode::Infeasible, ErrorCode::PoolTooLarge, ErrorCode::CapacityExceeded,
        ErrorCode::UnknownNode, ErrorCode::ParseError, ErrorCode::ValidationError,
        ErrorCode::Overflow, ErrorCode::IoError}) {
    if (to_string(code) == name) return code;
  }
  throw ParseError("unknown error code name: '" + std::string(name) + "'");
}

}  // namespace qcsync
