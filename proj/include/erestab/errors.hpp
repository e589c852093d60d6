#pragma once

#include <stdexcept>
#include <string>

namespace erestab {

/// Bad input: out-of-range parameters, wrong dimensions, malformed requests.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not reach its accuracy target.
struct NumericFailure : std::runtime_error {
  double where = 0.0;     // last abscissa reached, when meaningful
  double estimate = 0.0;  // achieved error estimate, when meaningful
  NumericFailure(const std::string& what, double where_ = 0.0, double estimate_ = 0.0)
      : std::runtime_error(what), where(where_), estimate(estimate_) {}
};

/// An internal precondition that should be impossible to violate.
struct InvalidState : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace erestab
