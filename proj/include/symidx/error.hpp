#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symidx {

enum class ErrorKind {
  Dimension,
  Parameter,
  InvalidInput,
  InvalidPath,
  SingularRetraction,
  AmbiguousClassification,
  Resolution,
  EndpointDegenerate,
  IrregularCrossing,
  Extension,
  EndpointSingular,
  Convergence,
  NotLagrangian,
  Internal,
  GradientFailure,
  StepFailure,
  NoOrbitFound,
  DSquaredNonzero,
  DegreeRule,
  ActionIncreasing,
  GradingMismatch,
  Unsupported,
  Parse,
};

/// Kebab-case name used in machine-readable error reports.
constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidPath: return "invalid-path";
    case ErrorKind::SingularRetraction: return "singular-retraction";
    case ErrorKind::AmbiguousClassification: return "ambiguous-classification";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::EndpointDegenerate: return "endpoint-degenerate";
    case ErrorKind::IrregularCrossing: return "irregular-crossing";
    case ErrorKind::Extension: return "extension";
    case ErrorKind::EndpointSingular: return "endpoint-singular";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::NotLagrangian: return "not-lagrangian";
    case ErrorKind::Internal: return "internal-consistency";
    case ErrorKind::GradientFailure: return "gradient-failure";
    case ErrorKind::StepFailure: return "step-failure";
    case ErrorKind::NoOrbitFound: return "no-orbit-found";
    case ErrorKind::DSquaredNonzero: return "d-squared-nonzero";
    case ErrorKind::DegreeRule: return "degree-rule";
    case ErrorKind::ActionIncreasing: return "action-increasing";
    case ErrorKind::GradingMismatch: return "grading-mismatch";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace symidx
