#pragma once

#include <stdexcept>
#include <string>

namespace reap {

/// Malformed or inconsistent user input (dimensions, bounds, schema).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to meet its postcondition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reference or equilibrium has no interior steady-state pair.
class TargetError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The omega* search hit its cap of 100 stages.
class OmegaCapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Phase-1 found no feasible control sequence for the initial state.
class RegionOfAttractionError : public std::runtime_error {
 public:
  RegionOfAttractionError()
      : std::runtime_error(
            "The specified initial condition does not belong to the region "
            "of attraction. REAP-T cannot proceed.") {}
};

/// Phase-1 is feasible on the linear rows but the quadratic terminal row
/// cannot be reached within the horizon.
class HorizonError : public std::runtime_error {
 public:
  HorizonError()
      : std::runtime_error(
            "The specified prediction horizon length is insufficient for "
            "implementing the Lyapunov-based method. Please increase the "
            "prediction horizon length.") {}
};

/// Barrier evaluated outside sigma * g < 1.
class BarrierDomainError : public std::domain_error {
 public:
  BarrierDomainError() : std::domain_error("barrier domain violated") {}
};

/// Closed-loop safety net: a state or input left its box.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reap
