#pragma once

#include <stdexcept>
#include <string>

namespace czlab {

enum class ErrorKind {
  kLevelOverflow,
  kAboveRoot,
  kGridMismatch,
  kNonpositiveWeight,
  kInvalidArgument,
  kPrecondition,
  kCoefficientBound,
  kInconsistentInput,
  kNonConvergence,
  kInvariantViolation,
  kConfig,
  kIo,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace czlab
