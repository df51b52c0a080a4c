#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace polyplane {

// Domain failure with a stable machine-readable code ("EdgeMismatch",
// "NotJenkinsStrebel", ...). The CLI maps these to exit code 1 and a JSON
// {code, message} record on stderr.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
  throw DomainError(std::move(code), message);
}

}  // namespace polyplane
