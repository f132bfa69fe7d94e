#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reap/config.hpp"
#include "reap/sim.hpp"

namespace reap {

// Process exit codes shared by the validation pipeline and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitUncontrollable = 2;
inline constexpr int kExitTarget = 3;
inline constexpr int kExitUnobservable = 4;
inline constexpr int kExitHorizon = 5;
inline constexpr int kExitRegion = 6;
inline constexpr int kExitTerminal = 7;
inline constexpr int kExitSimulation = 8;
inline constexpr int kExitUsage = 64;

inline constexpr const char* kMsgUncontrollable =
    "The pair (A,B) is not controllable. REAP-T cannot proceed with the "
    "specified system.";
inline constexpr const char* kMsgRegion =
    "The specified initial condition does not belong to the region of "
    "attraction. REAP-T cannot proceed.";
inline constexpr const char* kMsgUnobservable =
    "The pair (C, A) is not observable. Please use the Lyapunov-based "
    "method to implement the terminal constraint set.";
inline constexpr const char* kMsgHorizon =
    "The specified prediction horizon length is insufficient for "
    "implementing the Lyapunov-based method. Please increase the "
    "prediction horizon length.";

struct ValidationReport {
  int exit_code = kExitOk;
  /// Diagnostic for the first failed check; empty on success.
  std::string message;
  DiscreteLti model;
  std::optional<Controller> controller;
  std::optional<ReapIterate> initial;

  bool ok() const { return exit_code == kExitOk; }
};

/// Runs discretization, controllability, target resolution, terminal set
/// construction and the initial feasibility check, stopping at the first
/// failure.
ValidationReport validate(const RunConfig& cfg);

/// Terminal method the pipeline would pick for this configuration.
TerminalMethod resolve_method(const RunConfig& cfg, const DiscreteLti& model);

}  // namespace reap
