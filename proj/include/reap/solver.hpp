#pragma once

#include <functional>
#include <optional>

#include "reap/qpform.hpp"

namespace reap {

struct SolverSettings {
  double sigma_max = 1e3;
  double sigma_min = 1e-3;
  double eta = 0.1;
  /// Euler step; unset selects 0.5 / (sigma_max * lambda_max(Hq)).
  std::optional<double> dtau;
  int max_backtracks = 30;
};

struct ReapIterate {
  Vector u_hat;
  Vector lam_hat;
  double sigma = 1.0;
  long tau = 0;
  double dtau = 1e-3;
};

struct StepOutcome {
  bool accepted = false;
  long iterations_run = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
  Vector applied_u;
  /// Iterate to warm start from: applied_u with the final duals and sigma.
  ReapIterate final_iterate;
};

struct Budget {
  long iterations = 0;
  /// Wall-clock mode: run until the deadline instead of a fixed count.
  std::optional<double> deadline_ms;
};

using IterateObserver = std::function<void(const ReapIterate&)>;

double resolve_dtau(const QpProblem& qp, const SolverSettings& settings);

/// Largest sigma on the grid sigma_max * 2^-j (j = 0..40) keeping
/// sigma * max(0, g_i + delta) <= 1 - eta on every non-constant row;
/// never below sigma_min.
double sigma_update(const ReapIterate& it, const QpProblem& qp,
                    const SolverSettings& settings = {});

/// Strictly feasible starting point from a phase-1 LP. Throws
/// RegionOfAttractionError if the linear rows admit no interior point and
/// HorizonError if only the quadratic terminal row makes it empty.
ReapIterate initialize_at_k0(const QpProblem& qp,
                             const SolverSettings& settings = {});

/// One explicit Euler step of the primal-dual flow. The primal candidate is
/// projected onto the linear rows and backtracked against the quadratic
/// row; an iterate that cannot be made feasible is returned unchanged.
ReapIterate flow_step(const ReapIterate& it, const QpProblem& qp,
                      const SolverSettings& settings = {});

/// Shifted primal plus terminal control law, shifted duals. Falls back to
/// initialize_at_k0 when the shifted plan is infeasible for qp_next.
ReapIterate warm_start(const ReapIterate& prev, const DiscreteLti& model,
                       const Matrix& K, const SteadyTarget& target,
                       const QpProblem& qp_next, const Vector& x_pred_N,
                       const SolverSettings& settings = {},
                       bool* fell_back = nullptr);

StepOutcome run_budgeted(const ReapIterate& it0, const QpProblem& qp,
                         const Budget& budget,
                         const SolverSettings& settings = {},
                         const IterateObserver& observer = {});

}  // namespace reap
