#pragma once

#include <stdexcept>
#include <string>

namespace windeval {

enum class ErrorKind { validation, io };

// Every failure carries a stable machine-readable code such as
// "shape-mismatch" or "time-misalignment"; the CLI maps the kind to its
// exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        kind_(kind),
        code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& detail = {}) {
  throw Error(ErrorKind::validation, std::move(code), detail);
}

[[noreturn]] inline void fail_io(const std::string& detail) {
  throw Error(ErrorKind::io, "io", detail);
}

}  // namespace windeval
