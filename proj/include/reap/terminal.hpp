#pragma once

#include <variant>

#include "reap/lti.hpp"
#include "reap/plant.hpp"

namespace reap {

/// Prediction-based terminal set {x : H x <= h}, stacking the closed-loop
/// admissibility rows of stages 0..omega_star. Rows of infinite bounds are
/// omitted.
struct PolyhedralTerminal {
  Matrix H;
  Vector h;
  int omega_star = 0;
};

/// Lyapunov-based terminal set {x : (x - xbar)' Psi (x - xbar) <= Gamma_i}.
/// Gamma holds 2(n+p) levels in the order state upper, state lower, input
/// upper, input lower; infinite bounds give +inf. gamma = min(Gamma).
struct QuadraticTerminal {
  Matrix Psi;
  Vector Gamma;
  Vector xbar;
  double gamma = 0.0;
};

using TerminalSet = std::variant<PolyhedralTerminal, QuadraticTerminal>;

/// Admissibility rows R x <= d for the closed-loop prediction at `stage`
/// under u = ubar + K (x - xbar): state upper, state lower, input upper,
/// input lower, finite bounds only.
struct StageRows {
  Matrix R;
  Vector d;
};
StageRows closed_loop_rows(const DiscreteLti& model, const Matrix& K,
                           const SteadyTarget& target, const BoxSet& X,
                           const BoxSet& U, int stage);

/// Smallest omega* such that the rows of stage omega*+1 are implied by the
/// rows of stages 0..omega* (one LP per row). Throws OmegaCapError when no
/// such index exists below 100.
PolyhedralTerminal compute_omega_star(const DiscreteLti& model,
                                      const Matrix& K,
                                      const SteadyTarget& target,
                                      const BoxSet& X, const BoxSet& U);

/// Level sets of Psi that keep x and the terminal input inside the boxes.
/// Throws ConfigError if some level is not positive.
QuadraticTerminal lyapunov_terminal_set(const DiscreteLti& model,
                                        const Matrix& K, const Matrix& Psi,
                                        const SteadyTarget& target,
                                        const BoxSet& X, const BoxSet& U);

struct Membership {
  bool member = false;
  Vector residual;  ///< <= 0 componentwise inside the set
};

Membership terminal_membership(const TerminalSet& set, const Vector& x);

/// Number of scalar constraints the set contributes.
int terminal_row_count(const TerminalSet& set);

}  // namespace reap
