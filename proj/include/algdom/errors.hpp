#pragma once

#include <stdexcept>
#include <string>

namespace algdom {

// Every failure mode the library reports deliberately. Codes are stable
// identifiers: the CLI maps them to exit codes and machine-readable JSON,
// and tests assert on them.
enum class ErrorCode {
  // polynomials / roots
  DegeneratePoints,
  IdenticallyZero,
  ToleranceTooCoarse,
  // systems
  BudgetExceeded,
  SingularCluster,
  Diverged,
  SingularJacobian,
  // curvegeo
  SingularPoint,
  SingularCurve,
  TraceStalled,
  SignUndetermined,
  // domain
  TriplePoint,
  TangentialCrossing,
  CurveMissesClosure,
  UnboundedDomain,
  OnCurve,
  OutsideBox,
  ClosureMembershipUndecided,
  // reeb
  NotMorse,
  MembershipUndecided,
  SweepMatchingAmbiguous,
  TooLarge,
  // surgery
  HypothesisViolated,
  NoValidRadius,
  SeedSwallowed,
  ValidationFailed,
  GraphChanged,
  NotConverged,
  // realize
  InvalidGraph,
  ClearanceTooSmall,
  FitFailed,
  SingularFit,
  PlacementFailed,
  GraphMismatch,
  // io / cli
  ParseError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegeneratePoints: return "DegeneratePoints";
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::ToleranceTooCoarse: return "ToleranceTooCoarse";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SingularCluster: return "SingularCluster";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::SingularCurve: return "SingularCurve";
    case ErrorCode::TraceStalled: return "TraceStalled";
    case ErrorCode::SignUndetermined: return "SignUndetermined";
    case ErrorCode::TriplePoint: return "TriplePoint";
    case ErrorCode::TangentialCrossing: return "TangentialCrossing";
    case ErrorCode::CurveMissesClosure: return "CurveMissesClosure";
    case ErrorCode::UnboundedDomain: return "UnboundedDomain";
    case ErrorCode::OnCurve: return "OnCurve";
    case ErrorCode::OutsideBox: return "OutsideBox";
    case ErrorCode::ClosureMembershipUndecided: return "ClosureMembershipUndecided";
    case ErrorCode::NotMorse: return "NotMorse";
    case ErrorCode::MembershipUndecided: return "MembershipUndecided";
    case ErrorCode::SweepMatchingAmbiguous: return "SweepMatchingAmbiguous";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NoValidRadius: return "NoValidRadius";
    case ErrorCode::SeedSwallowed: return "SeedSwallowed";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::GraphChanged: return "GraphChanged";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::ClearanceTooSmall: return "ClearanceTooSmall";
    case ErrorCode::FitFailed: return "FitFailed";
    case ErrorCode::SingularFit: return "SingularFit";
    case ErrorCode::PlacementFailed: return "PlacementFailed";
    case ErrorCode::GraphMismatch: return "GraphMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace algdom
