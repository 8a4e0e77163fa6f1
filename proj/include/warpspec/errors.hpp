#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpspec {

enum class ErrorKind {
  InvalidParameter,
  DomainError,
  SecondDerivativeUnavailable,
  QuadratureFailure,
  WrongVolumeRegime,
  PrecisionLoss,
  MeshFailure,
  NoOscillationFound,
  NotRepresentable,
  ConfigError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidParameter: return "InvalidParameter";
  case ErrorKind::DomainError: return "DomainError";
  case ErrorKind::SecondDerivativeUnavailable: return "SecondDerivativeUnavailable";
  case ErrorKind::QuadratureFailure: return "QuadratureFailure";
  case ErrorKind::WrongVolumeRegime: return "WrongVolumeRegime";
  case ErrorKind::PrecisionLoss: return "PrecisionLoss";
  case ErrorKind::MeshFailure: return "MeshFailure";
  case ErrorKind::NoOscillationFound: return "NoOscillationFound";
  case ErrorKind::NotRepresentable: return "NotRepresentable";
  case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

} // namespace warpspec
