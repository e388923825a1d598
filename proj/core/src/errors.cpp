#include "frontspeed/errors.hpp"

namespace frontspeed {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain_violation: return "DomainViolation";
    case ErrorCode::saturated: return "Saturated";
    case ErrorCode::degenerate: return "Degenerate";
    case ErrorCode::symmetry_violation: return "SymmetryViolation";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::hypothesis_violation: return "HypothesisViolation";
    case ErrorCode::step_failure: return "StepFailure";
    case ErrorCode::non_finite: return "NonFinite";
    case ErrorCode::insufficient_resolution: return "InsufficientResolution";
    case ErrorCode::no_real_roots: return "NoRealRoots";
    case ErrorCode::bracket_not_closed: return "BracketNotClosed";
    case ErrorCode::spec_violation: return "SpecViolation";
    case ErrorCode::root_not_bracketed: return "RootNotBracketed";
    case ErrorCode::anchor_on_plateau: return "AnchorOnPlateau";
    case ErrorCode::unbounded_a_plus: return "UnboundedAPlus";
    case ErrorCode::cfl_violation: return "CFLViolation";
    case ErrorCode::insufficient_window: return "InsufficientWindow";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace frontspeed
