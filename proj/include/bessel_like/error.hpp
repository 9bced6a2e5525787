#pragma once

#include <stdexcept>
#include <string>

namespace bessel_like {

enum class ErrorKind {
  domain,      // argument outside the mathematical domain (x <= 0, ...)
  validation,  // parameter outside a documented range
  numeric,     // quadrature / ODE / linear algebra failure
  range,       // evaluation outside tabulated range
  truncation,  // truncated problem too small for the requested accuracy
  config,      // configuration text malformed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorKind::validation, w) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};
struct RangeError : Error {
  explicit RangeError(const std::string& w) : Error(ErrorKind::range, w) {}
};
struct TruncationError : Error {
  explicit TruncationError(const std::string& w) : Error(ErrorKind::truncation, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

}  // namespace bessel_like
