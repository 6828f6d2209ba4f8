#pragma once

#include <stdexcept>
#include <string>

namespace fcair {

enum class ErrorKind {
  invalid_argument,
  io,
  parse,
  not_found,
};

/// Library-wide exception; the kind maps onto the C API status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fcair
