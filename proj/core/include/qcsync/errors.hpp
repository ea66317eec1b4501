#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcsync {

enum class ErrorCode {
  RefractionOutOfRange,
  NonPositiveTime,
  DelayExceedsBudget,
  NotSynchronized,
  LengthUnderflow,
  Infeasible,
  PoolTooLarge,
  CapacityExceeded,
  UnknownNode,
  ParseError,
  ValidationError,
  Overflow,
  IoError,
};

std::string_view to_string(ErrorCode code);
ErrorCode error_code_from_string(std::string_view name);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct RefractionOutOfRange : Error {
  explicit RefractionOutOfRange(const std::string& m) : Error(ErrorCode::RefractionOutOfRange, m) {}
};
struct NonPositiveTime : Error {
  explicit NonPositiveTime(const std::string& m) : Error(ErrorCode::NonPositiveTime, m) {}
};
struct DelayExceedsBudget : Error {
  explicit DelayExceedsBudget(const std::string& m) : Error(ErrorCode::DelayExceedsBudget, m) {}
};
struct NotSynchronized : Error {
  explicit NotSynchronized(const std::string& m) : Error(ErrorCode::NotSynchronized, m) {}
};
struct LengthUnderflow : Error {
  explicit LengthUnderflow(const std::string& m) : Error(ErrorCode::LengthUnderflow, m) {}
};
struct Infeasible : Error {
  explicit Infeasible(const std::string& m) : Error(ErrorCode::Infeasible, m) {}
};
struct PoolTooLarge : Error {
  explicit PoolTooLarge(const std::string& m) : Error(ErrorCode::PoolTooLarge, m) {}
};
struct CapacityExceeded : Error {
  explicit CapacityExceeded(const std::string& m) : Error(ErrorCode::CapacityExceeded, m) {}
};
struct UnknownNode : Error {
  explicit UnknownNode(const std::string& m) : Error(ErrorCode::UnknownNode, m) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorCode::ParseError, m) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& m) : Error(ErrorCode::ValidationError, m) {}
};
struct OverflowError : Error {
  explicit OverflowError(const std::string& m) : Error(ErrorCode::Overflow, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCode::IoError, m) {}
};

}  // namespace qcsync
