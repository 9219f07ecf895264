#pragma once

#include <stdexcept>
#include <string>

namespace qrtw {

enum class ErrorKind {
  NotUnitary,
  InvalidArgument,
  WindowTooSmall,
  DegenerateResonance,
  SingularSystem,
  TrivialBarrier,
  FullReflector,
  MarginViolation,
  NoConvergence,
  DivergentSeries,
  InvalidWaveNumber,
  EdgeOutOfWindow,
  Parse,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::DegenerateResonance: return "DegenerateResonance";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::TrivialBarrier: return "TrivialBarrier";
    case ErrorKind::FullReflector: return "FullReflector";
    case ErrorKind::MarginViolation: return "MarginViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DivergentSeries: return "DivergentSeries";
    case ErrorKind::InvalidWaveNumber: return "InvalidWaveNumber";
    case ErrorKind::EdgeOutOfWindow: return "EdgeOutOfWindow";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Library failure carrying a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qrtw
