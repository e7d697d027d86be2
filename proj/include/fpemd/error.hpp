#pragma once

#include <stdexcept>
#include <string>

namespace fpemd {

// Argument outside the owning type's invariants.
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Computation undefined for this input: logarithm domain, missing zero
// crossings, no autocorrelation peak and similar.
struct numeric_domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Malformed input file.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Too few extrema to build envelopes; the caller has reached the residual.
struct insufficient_extrema : numeric_domain_error {
  using numeric_domain_error::numeric_domain_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw precondition_error(message);
}

}  // namespace detail
}  // namespace fpemd
