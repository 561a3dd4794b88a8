#pragma once

#include <stdexcept>
#include <string>

namespace filterstat {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Liouvillian eigenbasis is (near-)defective.
struct DegenerateSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPhysicalSteadyState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A log/dilog argument sits on its branch cut with no imaginary offset.
struct ArgumentOnCut : std::domain_error {
  using std::domain_error::domain_error;
};

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeIntensity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroIntensity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace filterstat
