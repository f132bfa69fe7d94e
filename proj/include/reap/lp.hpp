#pragma once

#include <optional>

#include "reap/lti.hpp"

namespace reap {

/// maximize objective . z  subject to  ineq_lhs z <= ineq_rhs, z free.
struct LpProblem {
  Vector objective;
  Matrix ineq_lhs;
  Vector ineq_rhs;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::optional<double> optimum;
  std::optional<Vector> argmax;
};

/// Dense two-phase tableau simplex. Free variables are split into positive
/// and negative parts. Pricing is Dantzig's rule; after 50 consecutive
/// degenerate pivots it switches to Bland's rule until progress resumes.
/// Throws NumericalError after 1e6 pivots.
LpResult lp_solve(const LpProblem& problem);

}  // namespace reap
