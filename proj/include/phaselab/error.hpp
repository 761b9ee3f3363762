#pragma once

#include <stdexcept>
#include <string>

namespace phaselab {

enum class ErrorCode {
  invalid_argument = 1,
  unsupported_set = 2,
  budget_exceeded = 3,
  parse_error = 4,
  insufficient_data = 5,
  io_error = 6,
};

// All library failures are reported through this one exception type; the
// C layer maps `code()` onto its status enum.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::invalid_argument, message);
}

}  // namespace phaselab
