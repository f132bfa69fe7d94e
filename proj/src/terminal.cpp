#include "reap/terminal.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/LU>

#include "reap/errors.hpp"
#include "reap/lp.hpp"

namespace reap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kOmegaCap = 100;
constexpr double kImpliedTol = 1e-9;
constexpr double kMemberTol = 1e-9;

// Rows in deviation coordinates e = x - xbar: R e <= d.
StageRows deviation_rows(const Matrix& Acl_pow, const Matrix& K,
                         const SteadyTarget& target, const BoxSet& X,
                         const BoxSet& U) {
  const auto n = Acl_pow.rows();
  const Matrix KP = K * Acl_pow;
  std::vector<std::pair<Eigen::RowVectorXd, double>> rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(X.upper()(i))) {
      rows.emplace_back(Acl_pow.row(i), X.upper()(i) - target.xbar(i));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(X.lower()(i))) {
      rows.emplace_back(-Acl_pow.row(i), target.xbar(i) - X.lower()(i));
    }
  }
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    if (std::isfinite(U.upper()(i))) {
      rows.emplace_back(KP.row(i), U.upper()(i) - target.ubar(i));
    }
  }
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    if (std::isfinite(U.lower()(i))) {
      rows.emplace_back(-KP.row(i), target.ubar(i) - U.lower()(i));
    }
  }
  StageRows out{Matrix(rows.size(), n), Vector(rows.size())};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.R.row(r) = rows[r].first;
    out.d(r) = rows[r].second;
  }
  return out;
}

Matrix matrix_power(const Matrix& M, int k) {
  Matrix P = Matrix::Identity(M.rows(), M.cols());
  for (int i = 0; i < k; ++i) P = M * P;
  return P;
}

}  // namespace

StageRows closed_loop_rows(const DiscreteLti& model, const Matrix& K,
                           const SteadyTarget& target, const BoxSet& X,
                           const BoxSet& U, int stage) {
  const Matrix Acl = model.A + model.B * K;
  StageRows dev = deviation_rows(matrix_power(Acl, stage), K, target, X, U);
  dev.d += dev.R * target.xbar;
  return dev;
}

PolyhedralTerminal compute_omega_star(const DiscreteLti& model,
                                      const Matrix& K,
                                      const SteadyTarget& target,
                                      const BoxSet& X, const BoxSet& U) {
  const int n = model.states();
  const Matrix Acl = model.A + model.B * K;

  // Accumulated rows of stages 0..phi, normalized, zero rows dropped.
  Matrix acc_R(0, n);
  Vector acc_d(0);
  auto append = [&](const StageRows& rows) {
    for (Eigen::Index r = 0; r < rows.R.rows(); ++r) {
      const double norm = rows.R.row(r).norm();
      if (norm <= 1e-14) continue;  // 0 <= d with d > 0: always satisfied
      acc_R.conservativeResize(acc_R.rows() + 1, Eigen::NoChange);
      acc_d.conservativeResize(acc_d.size() + 1);
      acc_R.row(acc_R.rows() - 1) = rows.R.row(r) / norm;
      acc_d(acc_d.size() - 1) = rows.d(r) / norm;
    }
  };

  Matrix power = Matrix::Identity(n, n);
  append(deviation_rows(power, K, target, X, U));

  for (int phi = 0; phi < kOmegaCap; ++phi) {
    power = Acl * power;
    const StageRows next = deviation_rows(power, K, target, X, U);
    bool implied = true;
    for (Eigen::Index r = 0; r < next.R.rows() && implied; ++r) {
      const double norm = next.R.row(r).norm();
      if (norm <= 1e-14) continue;
      LpProblem lp{next.R.row(r).transpose() / norm, acc_R, acc_d};
      const LpResult res = lp_solve(lp);
      switch (res.status) {
        case LpStatus::kUnbounded:
          implied = false;
          break;
        case LpStatus::kInfeasible:
          throw NumericalError(
              "terminal set LP infeasible: target is not admissible");
        case LpStatus::kOptimal:
          if (*res.optimum - next.d(r) / norm > kImpliedTol) implied = false;
          break;
      }
    }
    if (implied) {
      PolyhedralTerminal out;
      out.H = acc_R;
      out.h = acc_d + acc_R * target.xbar;
      out.omega_star = phi;
      return out;
    }
    append(next);
  }
  throw OmegaCapError(
      "omega* = 100: the prediction-based method may not be suitable for "
      "this system; use the Lyapunov-based method");
}

QuadraticTerminal lyapunov_terminal_set(const DiscreteLti& model,
                                        const Matrix& K, const Matrix& Psi,
                                        const SteadyTarget& target,
                                        const BoxSet& X, const BoxSet& U) {
  const int n = model.states();
  const int p = model.inputs();
  const Matrix Psi_inv = Psi.inverse();
  const Matrix KPK = K * Psi_inv * K.transpose();

  QuadraticTerminal out;
  out.Psi = Psi;
  out.xbar = target.xbar;
  out.Gamma.resize(2 * (n + p));

  auto level = [](double gap, double denom) {
    if (!std::isfinite(gap) || denom <= 0.0) return kInf;
    return gap * gap / denom;
  };
  for (int i = 0; i < n; ++i) {
    out.Gamma(i) = level(target.xbar(i) - X.upper()(i), Psi_inv(i, i));
    out.Gamma(n + i) = level(X.lower()(i) - target.xbar(i), Psi_inv(i, i));
  }
  for (int i = 0; i < p; ++i) {
    out.Gamma(2 * n + i) = level(target.ubar(i) - U.upper()(i), KPK(i, i));
    out.Gamma(2 * n + p + i) =
        level(U.lower()(i) - target.ubar(i), KPK(i, i));
  }
  if ((out.Gamma.array() <= 0.0).any()) {
    throw ConfigError("terminal level set is empty: target on a boundary");
  }
  out.gamma = out.Gamma.minCoeff();
  return out;
}

Membership terminal_membership(const TerminalSet& set, const Vector& x) {
  Membership out;
  if (const auto* poly = std::get_if<PolyhedralTerminal>(&set)) {
    out.residual = poly->H * x - poly->h;
  } else {
    const auto& quad = std::get<QuadraticTerminal>(set);
    const Vector e = x - quad.xbar;
    const double v = e.dot(quad.Psi * e);
    out.residual = v - quad.Gamma.array();
  }
  out.member = out.residual.size() == 0 ||
               out.residual.maxCoeff() <= kMemberTol;
  return out;
}

int terminal_row_count(const TerminalSet& set) {
  if (const auto* poly = std::get_if<PolyhedralTerminal>(&set)) {
    return static_cast<int>(poly->H.rows());
  }
  return std::isfinite(std::get<QuadraticTerminal>(set).gamma) ? 1 : 0;
}

}  // namespace reap
