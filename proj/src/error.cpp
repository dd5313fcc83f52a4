#include "czlab/error.hpp"

namespace czlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kLevelOverflow: return "level-overflow";
    case ErrorKind::kAboveRoot: return "above-root";
    case ErrorKind::kGridMismatch: return "grid-mismatch";
    case ErrorKind::kNonpositiveWeight: return "nonpositive-weight";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kCoefficientBound: return "coefficient-bound";
    case ErrorKind::kInconsistentInput: return "inconsistent-input";
    case ErrorKind::kNonConvergence: return "non-convergence";
    case ErrorKind::kInvariantViolation: return "invariant-violation";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace czlab
