#pragma once

#include <stdexcept>
#include <string>

namespace d4m {

// Error categories are a stable contract: the C API and the CLI exit codes
// are derived from them.
enum class ErrorCode {
  kIo = 1,
  kParse = 2,
  kMemoryCap = 3,
  kValidation = 4,
  kInvalidArgument = 5,
  kKindMismatch = 6,
  kConflict = 7,
};

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

}  // namespace d4m
