#pragma once

#include <stdexcept>
#include <string>

namespace cncfl {

/// A numeric parameter is outside its admissible domain (negative lambda,
/// negative non-convexity degree, infeasible a0*lambda0, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Vector lengths are incompatible with the requested operation.
struct SizeError : std::length_error {
  using std::length_error::length_error;
};

/// The configuration violates 1 - a0*lambda0 - 4*a1*lambda1 >= 0 and the
/// caller did not opt into the non-convex regime.
struct ConvexityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Non-finite samples or otherwise unusable input data.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Invalid pulse-train description.
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed signal file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace cncfl
