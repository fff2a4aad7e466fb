#pragma once

#include <stdexcept>
#include <string>

namespace windtree {

// Numeric values are shared with the C API status codes in windtree.h.
enum class ErrorCode : int {
  Ok = 0,
  DomainError = 1,
  CornerHit = 2,
  GluingError = 3,
  NonClosedCurve = 4,
  NotSquareFree = 5,
  SaddleConnection = 6,
  NonReturning = 7,
  TieBreak = 8,
  Degenerate = 9,
  InsufficientData = 10,
  RetryExhausted = 11,
  InvalidArgument = 12,
  IoError = 13,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace windtree
