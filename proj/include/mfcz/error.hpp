#pragma once

#include <stdexcept>
#include <string>

namespace mfcz {

enum class ErrorCode {
  invalid_argument,
  precondition,
  io,
  numeric,
  unknown_name,
};

/// Library-wide exception. Carries a machine-readable code so the C API can
/// map failures onto status values without parsing messages.
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

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace mfcz
