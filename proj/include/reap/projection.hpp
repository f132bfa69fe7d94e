#pragma once

#include "reap/lti.hpp"

namespace reap {

/// Euclidean projection of `target` onto {v : A v <= b}, computed by a
/// primal active-set method started at `start`. Rows where `start` already
/// exceeds b are relaxed to their current value, so the result never
/// increases any row beyond max(b_i, A_i start).
Vector project_onto_polytope(const Matrix& A, const Vector& b,
                             const Vector& start, const Vector& target);

}  // namespace reap
