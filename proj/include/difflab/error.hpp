#pragma once

#include <stdexcept>
#include <string>

namespace difflab {

// Mirrors difflab_status in difflab.h; keep the numeric values in sync.
enum class ErrorCode : int {
  InvalidArgument = 1,
  WindowTooLarge = 2,
  NegativeArgument = 3,
  NoConvergence = 4,
  DimensionTooLarge = 5,
  AtomLocation = 6,
  SingularPoint = 7,
  TooFewPoints = 8,
  GridMismatch = 9,
  AllPointsExcluded = 10,
  Config = 11,
  Io = 12,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace difflab
