#pragma once

#include <stdexcept>
#include <string>

namespace dnslab {

// Coarse failure classes; the C layer maps these 1:1 onto status codes.
enum class ErrorKind {
  InvalidArgument,  // bad shapes, out-of-range options, contract misuse
  Parse,            // config / snapshot syntax
  Validation,       // semantic violations in validated input
  Io,
  Numerics,         // CFL violation, positivity loss, solver non-convergence
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace dnslab
