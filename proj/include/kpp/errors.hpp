#pragma once

#include <stdexcept>
#include <string>

namespace kpp {

/// Reaction fails basic sanity (non-finite values, no positive mass, ...).
struct InvalidReactionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested derivative/feature is not available for this reaction.
struct UnsupportedReactionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Phase-plane shooting left the admissible strip (speed too small, offset too large).
struct ShootingFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stored profile does not resolve enough tail decades for a fit.
struct TailTooShortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time stepper produced a non-finite value (time step too large).
struct BlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sub/supersolution sandwich was violated beyond solver tolerance.
struct ConstructionFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The boundary-gradient threshold was not crossed before the time cap.
struct DetectionTimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad run configuration or file format (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kpp
