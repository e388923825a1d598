#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frontspeed {

enum class ErrorCode {
  domain_violation,
  saturated,
  degenerate,
  symmetry_violation,
  parse_error,
  hypothesis_violation,
  step_failure,
  non_finite,
  insufficient_resolution,
  no_real_roots,
  bracket_not_closed,
  spec_violation,
  root_not_bracketed,
  anchor_on_plateau,
  unbounded_a_plus,
  cfl_violation,
  insufficient_window,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

/// Base for every failure raised by the library. The code is stable and
/// is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A model rejected because it breaks one of the structural hypotheses;
/// `hypothesis()` names it ("nc", "l", "H_r", "oelip", ...).
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::string hypothesis, const std::string& what)
      : Error(ErrorCode::hypothesis_violation, "(" + hypothesis + ") " + what),
        hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

}  // namespace frontspeed
