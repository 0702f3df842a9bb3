#pragma once

#include <stdexcept>
#include <string>

namespace absnormal {

// Failure classes surfaced by the core. The C API maps each kind onto a
// status code and the CLI onto an exit code.
enum class ErrorKind {
  invalid_argument,  // precondition or domain violation
  budget,            // work budget would be exceeded
  indeterminate,     // enclosure refinement cap hit
  parse,             // malformed certificate / config / number
  io,
  verification,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::invalid_argument, what);
}

}  // namespace absnormal
