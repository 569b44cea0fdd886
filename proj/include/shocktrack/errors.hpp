#pragma once

#include <stdexcept>
#include <string>

namespace shocktrack {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: malformed config, out-of-range query, inconsistent shapes.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Physical-state validity violated (negative depth/density/pressure).
struct AdmissibilityError : Error {
  explicit AdmissibilityError(const std::string& msg) : Error(msg) {}
};

// Eigenvalues are complex or repeated where strict hyperbolicity is assumed.
struct HyperbolicityError : Error {
  explicit HyperbolicityError(const std::string& msg) : Error(msg) {}
};

// A spatial query fell outside the computational domain.
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A subdomain degenerated to zero width (discontinuity lines touching).
struct CollapseError : Error {
  explicit CollapseError(const std::string& msg) : Error(msg) {}
};

// Discontinuity lines are out of order at some time.
struct OrderingError : Error {
  explicit OrderingError(const std::string& msg) : Error(msg) {}
};

// Training produced a non-finite loss.
struct DivergenceError : Error {
  DivergenceError(const std::string& msg, long epoch_, const std::string& term_)
      : Error(msg), epoch(epoch_), term(term_) {}
  long epoch = -1;
  std::string term;
};

// Shock-path extraction lost the discontinuity between snapshots.
struct TrackingError : Error {
  explicit TrackingError(const std::string& msg) : Error(msg) {}
};

// Riemann problem has no solution with positive depth/pressure.
struct VacuumError : Error {
  explicit VacuumError(const std::string& msg) : Error(msg) {}
};

// Wave-curve fitting or intersection failed to produce usable output.
struct DecompositionError : Error {
  explicit DecompositionError(const std::string& msg) : Error(msg) {}
};

}  // namespace shocktrack
