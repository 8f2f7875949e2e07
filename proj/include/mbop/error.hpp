#pragma once

#include <stdexcept>
#include <string>

namespace mbop {

// Failure taxonomy for the whole library.  Every throw site uses Error with
// one of these codes; the CLI maps ConfigInvalid to exit 2 and everything
// else to exit 3.
enum class ErrorCode {
  Singular,
  IllConditioned,
  BranchCut,
  ZeroBase,
  NotPolynomial,
  QuadratureNotConverged,
  HankelSingular,
  TooCloseToCut,
  InsufficientMoments,
  DerivativeInconsistent,
  UnsupportedDegree,
  InsufficientDepth,
  NotCommutative,
  SingularMu,
  StepSingular,
  DegenerateParameters,
  ConfigInvalid,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::ZeroBase: return "ZeroBase";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::HankelSingular: return "HankelSingular";
    case ErrorCode::TooCloseToCut: return "TooCloseToCut";
    case ErrorCode::InsufficientMoments: return "InsufficientMoments";
    case ErrorCode::DerivativeInconsistent: return "DerivativeInconsistent";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::InsufficientDepth: return "InsufficientDepth";
    case ErrorCode::NotCommutative: return "NotCommutative";
    case ErrorCode::SingularMu: return "SingularMu";
    case ErrorCode::StepSingular: return "StepSingular";
    case ErrorCode::DegenerateParameters: return "DegenerateParameters";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
        code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace mbop
