#pragma once

#include <stdexcept>
#include <string>

namespace liftoff {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kIo = 3,
  kNumerical = 4,
  kDiverged = 5,
  kContractViolation = 6,
};

// Base exception for every failure raised by the library. The C API maps
// the code onto lo_status.
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

}  // namespace liftoff
