#pragma once

#include <stdexcept>
#include <string>

namespace cvxls {

enum class ErrorKind {
  invalid_input,
  invalid_parameter,
  no_interface,
  region_collapse,
  convexity_violation,
  io,
  unsupported_depth,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cvxls
