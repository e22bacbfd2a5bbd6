#pragma once

#include <stdexcept>
#include <string>

namespace alfven {

/// Error categories surfaced through the C API as status codes.
enum class ErrorKind { config, domain, usage, blow_up, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Raised when a coefficient becomes non-finite or exceeds the blow-up threshold.
class BlowUpError : public Error {
 public:
  BlowUpError(double t_star, const std::string& what);
  double t_star() const noexcept { return t_star_; }

 private:
  double t_star_;
};

}  // namespace alfven
