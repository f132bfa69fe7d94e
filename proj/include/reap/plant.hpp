#pragma once

#include <string>

#include "reap/lti.hpp"

namespace reap {

/// Elementwise bounds lower <= v <= upper; either side may be infinite.
class BoxSet {
 public:
  BoxSet() = default;
  /// Throws ConfigError unless lengths match and lower[i] < upper[i].
  BoxSet(Vector lower, Vector upper);

  /// Every side infinite.
  static BoxSet unbounded(int size);

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  int size() const { return static_cast<int>(lower_.size()); }

  /// Per-component interior margin: 1e-6 of the width, or 1e-6 when a side
  /// is infinite.
  Vector interior_margin() const;

 private:
  Vector lower_;
  Vector upper_;
};

/// lower[i] + margin <= v[i] <= upper[i] - margin for all i.
bool contains(const BoxSet& box, const Vector& v, double margin = 0.0);

/// contains() with the per-component interior_margin().
bool strictly_interior(const BoxSet& box, const Vector& v);

/// Steady-state configuration: xbar = A xbar + B ubar, r = C xbar + D ubar.
struct SteadyTarget {
  Vector xbar;
  Vector ubar;
  Vector r;
};

/// Solves [A-I B; C D][xbar; ubar] = [0; r] for the minimum-norm pair.
/// Throws TargetError when no solution exists or the pair is not interior.
SteadyTarget resolve_target_from_reference(const DiscreteLti& model,
                                           const BoxSet& X, const BoxSet& U,
                                           const Vector& r);

/// Least-squares ubar with (A-I) xbar + B ubar = 0, then r = C xbar + D ubar.
SteadyTarget resolve_target_from_equilibrium(const DiscreteLti& model,
                                             const BoxSet& X, const BoxSet& U,
                                             const Vector& xbar);

/// Human-readable constraint block: state upper, state lower, input upper,
/// input lower bounds, one per line.
std::string list_constraints(const BoxSet& X, const BoxSet& U);

/// Shortest round-trip decimal, with infinities spelled Inf / -Inf.
std::string format_bound(double value);

}  // namespace reap
