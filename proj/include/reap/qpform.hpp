#pragma once

#include <optional>
#include <vector>

#include "reap/lti.hpp"
#include "reap/plant.hpp"
#include "reap/terminal.hpp"

namespace reap {

/// Stacked predictions x_hat = Sx x(k) + Su u over stages 0..N.
struct Prediction {
  Matrix Sx;  ///< (N+1)n x n, block s = A^s
  Matrix Su;  ///< (N+1)n x Np, block (s, j) = A^{s-1-j} B for j < s
  int horizon = 0;
};

Prediction build_prediction(const DiscreteLti& model, int horizon);

struct Weights {
  Matrix Qx;
  Matrix Qu;
  Matrix Qn;
};

enum class RowKind { kStateUpper, kStateLower, kInputUpper, kInputLower,
                     kTerminal };

/// Identifies a linear row so duals can follow the horizon shift.
struct RowTag {
  RowKind kind;
  int stage;  ///< 0..N-1 for state/input rows, -1 for terminal rows
  int index;  ///< component for state/input rows, row of H for terminal
};

/// g(u) = (E u + e0)' Psi (E u + e0) - level
struct QuadraticRow {
  Matrix E;
  Vector e0;
  Matrix Psi;
  double level = 0.0;
};

/// Condensed MPC problem in the stacked input u (length Np):
///   J(u) = 1/2 u' Hq u + fq' u + c0
///   g_i(u) = G_i u - b_i <= 0 for the linear rows, followed by at most one
///   quadratic row.
struct QpProblem {
  Matrix Hq;
  Vector fq;
  double c0 = 0.0;
  Matrix G;
  Vector b;
  std::vector<RowTag> tags;
  std::optional<QuadraticRow> quadratic;
  /// Uniform margin delta added to every g inside the barrier only.
  double tightening = 0.0;
  int horizon = 0;
  int states = 0;
  int inputs = 0;

  // Condensing data; when present, cost() evaluates the stage sum directly
  // so that an exact equilibrium evaluates to exactly zero.
  Matrix Su;
  Vector free_error;  ///< Sx x(k) - stacked xbar
  Vector uref;        ///< stacked ubar
  Vector terminal_offset;  ///< xbar
  Matrix Qx, Qu, Qn;

  /// Builds a bare problem without condensing data.
  static QpProblem dense(Matrix H, Vector f, Matrix G, Vector b,
                         double c0 = 0.0);

  int linear_rows() const { return static_cast<int>(G.rows()); }
  int rows() const { return linear_rows() + (quadratic ? 1 : 0); }
  int decision_size() const { return static_cast<int>(Hq.rows()); }

  double cost(const Vector& u) const;
  Vector constraints(const Vector& u) const;
  /// Rows of the constraint Jacobian, one per g_i.
  Matrix jacobian(const Vector& u) const;
  bool feasible(const Vector& u) const;
  /// x_hat(N | k) under u; requires condensing data.
  Vector terminal_state(const Vector& u) const;
};

/// Condenses the finite-horizon problem at state x_now. Linear rows are
/// ordered stage by stage (state upper, state lower, input upper, input
/// lower, finite bounds only), then the polyhedral terminal rows. A
/// quadratic terminal set contributes one row at its binding level.
QpProblem build_qp(const DiscreteLti& model, const Prediction& prediction,
                   const Weights& weights, const SteadyTarget& target,
                   const BoxSet& X, const BoxSet& U,
                   const TerminalSet& terminal, const Vector& x_now,
                   double tightening = 0.0);

/// Modified log barrier
///   B = J(u) - (1/sigma) sum_i lam_i ln(1 - sigma (g_i(u) + delta)).
/// Throws BarrierDomainError if sigma (g_i + delta) >= 1 for some row.
double barrier_value(const QpProblem& qp, const Vector& u, const Vector& lam,
                     double sigma);

struct BarrierGradients {
  Vector grad_u;
  Vector grad_lam;
};

BarrierGradients barrier_gradients(const QpProblem& qp, const Vector& u,
                                   const Vector& lam, double sigma);

}  // namespace reap
