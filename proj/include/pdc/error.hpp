#pragma once

#include <stdexcept>
#include <string>

namespace pdc {

enum class ErrorKind {
  usage,
  config,
  contract,
  shape,
  resolution,
  range,
  degenerate,
  non_physical,
  ill_posed,
  convergence,
};

/// Single exception type for the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// 1 usage, 2 config, 4 non-convergence, 3 for every numeric failure.
  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::usage:
        return 1;
      case ErrorKind::config:
        return 2;
      case ErrorKind::convergence:
        return 4;
      default:
        return 3;
    }
  }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::config: return "config";
    case ErrorKind::contract: return "contract";
    case ErrorKind::shape: return "shape";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::range: return "range";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::non_physical: return "non-physical";
    case ErrorKind::ill_posed: return "ill-posed";
    case ErrorKind::convergence: return "convergence";
  }
  return "unknown";
}

}  // namespace pdc
