#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "reap/lti.hpp"
#include "reap/plant.hpp"
#include "reap/sim.hpp"
#include "reap/solver.hpp"

namespace reap {

enum class TargetKind { kReference, kEquilibrium };

/// One JSON document mirroring the workflow: system, constraints, weights,
/// horizon, target, terminal method, simulation and solver settings.
struct RunConfig {
  bool continuous = false;
  Matrix A, B, C, D;
  double dt = 0.0;
  /// Matrices are placeholders the user is expected to replace.
  bool user_supplied = false;

  BoxSet X;
  BoxSet U;
  Matrix Qx;
  Matrix Qu;
  int horizon = 1;

  TargetKind target_kind = TargetKind::kReference;
  Vector target_value;

  /// Unset: prediction when (C, A) is observable, otherwise Lyapunov.
  std::optional<TerminalMethod> method;

  int steps = 1;
  Budget budget;
  Vector x0;

  SolverSettings solver;
  double tightening = 0.0;
};

/// Parses the JSON text; `origin` prefixes error messages. Throws
/// ConfigError naming the offending field.
RunConfig parse_config(const std::string& text,
                       const std::string& origin = "<config>");

RunConfig load_config(const std::filesystem::path& path);

TerminalMethod parse_method(const std::string& name);

}  // namespace reap
