#pragma once

#include <stdexcept>
#include <string>

namespace savsim {

enum class ErrorCode {
  invalid_input,
  not_found,
  config,
  io,
  internal,
};

// All library failures surface as this exception; the C API maps the code to
// a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace savsim
