#ifndef MEMLAB_ERRORS_HPP
#define MEMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace memlab {

enum class ErrorCode {
  ConfigError,
  ValidationError,
  NonPositiveDensity,
  WindowTooSmall,
  EllipticityViolation,
  StepTooLarge,
  QueryBeyondHorizon,
  EmptySample,
  MissingLocalTimes,
  RegimeMismatch,
  GammaFloorViolation,
  DensityZero,
  FrozenCoefficientRange,
  NoExitBeforeCap,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::EllipticityViolation: return "EllipticityViolation";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::QueryBeyondHorizon: return "QueryBeyondHorizon";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::MissingLocalTimes: return "MissingLocalTimes";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::GammaFloorViolation: return "GammaFloorViolation";
    case ErrorCode::DensityZero: return "DensityZero";
    case ErrorCode::FrozenCoefficientRange: return "FrozenCoefficientRange";
    case ErrorCode::NoExitBeforeCap: return "NoExitBeforeCap";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace memlab

#endif  // MEMLAB_ERRORS_HPP
