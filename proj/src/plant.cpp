#include "reap/plant.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/QR>

#include "reap/errors.hpp"

namespace reap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSteadyTol = 1e-8;
}  // namespace

BoxSet::BoxSet(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw ConfigError("bound vectors must have equal length");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_(i)) || std::isnan(upper_(i)) ||
        !(lower_(i) < upper_(i)) || lower_(i) == kInf ||
        upper_(i) == -kInf) {
      std::ostringstream msg;
      msg << "bound " << i + 1 << ": lower must be strictly below upper";
      throw ConfigError(msg.str());
    }
  }
}

BoxSet BoxSet::unbounded(int size) {
  return BoxSet(Vector::Constant(size, -kInf), Vector::Constant(size, kInf));
}

Vector BoxSet::interior_margin() const {
  Vector margin(size());
  for (int i = 0; i < size(); ++i) {
    const bool finite = std::isfinite(lower_(i)) && std::isfinite(upper_(i));
    margin(i) = finite ? 1e-6 * (upper_(i) - lower_(i)) : 1e-6;
  }
  return margin;
}

bool contains(const BoxSet& box, const Vector& v, double margin) {
  if (v.size() != box.size()) {
    throw ConfigError("contains: dimension mismatch");
  }
  for (int i = 0; i < box.size(); ++i) {
    if (v(i) < box.lower()(i) + margin || v(i) > box.upper()(i) - margin) {
      return false;
    }
  }
  return true;
}

bool strictly_interior(const BoxSet& box, const Vector& v) {
  const Vector margin = box.interior_margin();
  for (int i = 0; i < box.size(); ++i) {
    if (v(i) < box.lower()(i) + margin(i) ||
        v(i) > box.upper()(i) - margin(i)) {
      return false;
    }
  }
  return true;
}

namespace {

void check_interior(const BoxSet& X, const BoxSet& U,
                    const SteadyTarget& target) {
  if (X.size() != target.xbar.size() || U.size() != target.ubar.size()) {
    throw ConfigError("constraint dimensions do not match the model");
  }
  if (!strictly_interior(X, target.xbar) ||
      !strictly_interior(U, target.ubar)) {
    throw TargetError("target too close to constraint boundary");
  }
}

}  // namespace

SteadyTarget resolve_target_from_reference(const DiscreteLti& model,
                                           const BoxSet& X, const BoxSet& U,
                                           const Vector& r) {
  const int n = model.states();
  const int p = model.inputs();
  const int m = model.outputs();
  if (r.size() != m) throw ConfigError("reference length must equal outputs");
  if (!r.allFinite()) throw ConfigError("reference must be finite");

  Matrix M(n + m, n + p);
  M << model.A - Matrix::Identity(n, n), model.B, model.C, model.D;
  Vector rhs(n + m);
  rhs << Vector::Zero(n), r;

  // Minimum-norm least-squares solution of the stacked system.
  const Vector sol = M.completeOrthogonalDecomposition().solve(rhs);
  if ((M * sol - rhs).cwiseAbs().maxCoeff() > kSteadyTol) {
    throw TargetError("reference not steady-state admissible");
  }
  SteadyTarget target{sol.head(n), sol.tail(p), r};
  check_interior(X, U, target);
  return target;
}

SteadyTarget resolve_target_from_equilibrium(const DiscreteLti& model,
                                             const BoxSet& X, const BoxSet& U,
                                             const Vector& xbar) {
  const int n = model.states();
  if (xbar.size() != n) throw ConfigError("equilibrium length must equal n");
  if (!xbar.allFinite()) throw ConfigError("equilibrium must be finite");

  const Vector rhs = -(model.A - Matrix::Identity(n, n)) * xbar;
  const Vector ubar = model.B.completeOrthogonalDecomposition().solve(rhs);
  if ((model.B * ubar - rhs).cwiseAbs().maxCoeff() > kSteadyTol) {
    throw TargetError("x̄_r is not an equilibrium of the model");
  }
  SteadyTarget target{xbar, ubar, model.C * xbar + model.D * ubar};
  check_interior(X, U, target);
  return target;
}

std::string format_bound(double value) {
  if (value == kInf) return "Inf";
  if (value == -kInf) return "-Inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string list_constraints(const BoxSet& X, const BoxSet& U) {
  std::ostringstream out;
  out << "State Constraints:\n";
  int idx = 1;
  for (int i = 0; i < X.size(); ++i) {
    out << "State Constraint " << idx++ << ": x" << i + 1
        << " <= " << format_bound(X.upper()(i)) << '\n';
  }
  for (int i = 0; i < X.size(); ++i) {
    out << "State Constraint " << idx++ << ": x" << i + 1
        << " >= " << format_bound(X.lower()(i)) << '\n';
  }
  out << "Input Constraints:\n";
  idx = 1;
  for (int i = 0; i < U.size(); ++i) {
    out << "Input Constraint " << idx++ << ": u" << i + 1
        << " <= " << format_bound(U.upper()(i)) << '\n';
  }
  for (int i = 0; i < U.size(); ++i) {
    out << "Input Constraint " << idx++ << ": u" << i + 1
        << " >= " << format_bound(U.lower()(i)) << '\n';
  }
  return out.str();
}

}  // namespace reap
