#pragma once

#include <stdexcept>
#include <string>

namespace resil {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed document or unparsable value; the message names the offending
// line, field, or token.
struct ParseError : Error {
  using Error::Error;
};

// Model rejected by validate(); the message concatenates the diagnostics.
struct ValidationError : Error {
  using Error::Error;
};

// A strategy does not fit the model it is applied to (missing rule entries,
// actions of the wrong kind, counter mismatch).
struct StrategyIncompatible : Error {
  using Error::Error;
};

// Components passed to the MEC quotient share states.
struct OverlappingComponents : Error {
  using Error::Error;
};

// An enumeration or iteration cap was exhausted before an answer was found.
struct BudgetExceeded : Error {
  using Error::Error;
};

// A float-mode iteration failed to reach the requested precision.
struct NotConverged : Error {
  using Error::Error;
};

// A constrained optimization has no feasible point (no strategy meets the
// stated probability threshold).
struct Infeasible : Error {
  using Error::Error;
};

// An operation was called outside its stated precondition (for example,
// asking for a positive worst-case frequency when the objective is not even
// breakable in the long run).
struct PreconditionViolated : Error {
  using Error::Error;
};

// A model fails a structural assumption required by a construction, with the
// failing assumption named in the message.
struct AssumptionViolated : Error {
  using Error::Error;
};

}  // namespace resil
