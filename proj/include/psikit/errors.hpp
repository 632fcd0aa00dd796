#pragma once

#include <stdexcept>
#include <string>

namespace psikit {

// Base type for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// An input value lies outside a declared domain: an observation outside X,
// an evaluation point outside Theta, a negative weight, a bad interval.
struct DomainError : Error {
  using Error::Error;
};

// A configuration parameter is malformed: even power exponent, nonpositive
// tolerance, zero scale cap, unknown family name.
struct ParameterError : Error {
  using Error::Error;
};

// Container dimensions disagree (matrix size vs. observation count).
struct ShapeError : Error {
  using Error::Error;
};

// An ordering precondition is violated (sensitivity search requires the
// single-observation estimators to straddle the target interval).
struct OrderError : Error {
  using Error::Error;
};

// No sign change was found within the probe budget. Usually means the
// weighted psi sum does not change sign on Theta for this sample.
struct BracketError : Error {
  using Error::Error;
};

// A psi evaluation produced NaN, or an internal identity check failed.
struct NumericError : Error {
  using Error::Error;
};

// A work budget ran out before any result was produced.
struct BudgetError : Error {
  using Error::Error;
};

}  // namespace psikit
