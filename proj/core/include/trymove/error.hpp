#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trymove {

enum class ErrorKind {
  invalid_gesture,
  parse,
  invalid_size,
  infeasible_puzzle,
  spawn_region_too_small,
  schema,
  session_closed,
  ordering,
  hint_unavailable,
  invalid_time,
  shape,
  no_data,
  validation,
  not_found,
  conflict,
  io,
};

std::string_view to_string(ErrorKind kind);

// All failures raised by the library carry a kind so that callers (the CLI,
// the HTTP service) can map them onto exit codes and status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace trymove
