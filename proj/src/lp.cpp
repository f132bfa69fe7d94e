#include "reap/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "reap/errors.hpp"

namespace reap {
namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-10;
constexpr long kMaxPivots = 1000000;
constexpr int kDegenerateSwitch = 50;

// Tableau in the "row 0 = -c" convention: z + row0 . x = rhs0, so entering
// candidates are columns with a negative row-0 entry.
class Tableau {
 public:
  Tableau(Matrix t, std::vector<int> basis)
      : t_(std::move(t)), basis_(std::move(basis)) {}

  Matrix& table() { return t_; }
  const Matrix& table() const { return t_; }
  std::vector<int>& basis() { return basis_; }

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double rhs(Eigen::Index row) const { return t_(row + 1, cols()); }

  // Runs simplex pivots over columns [0, allowed_cols). Returns false if
  // the objective is unbounded.
  bool optimize(Eigen::Index allowed_cols, long& pivots) {
    int degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= kDegenerateSwitch;
      Eigen::Index enter = -1;
      double best = -kCostTol;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        const double rc = t_(0, j);
        if (bland) {
          if (rc < -kCostTol) {
            enter = j;
            break;
          }
        } else if (rc < best) {
          best = rc;
          enter = j;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i + 1, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        bool take = leave < 0 || ratio < best_ratio - 1e-12;
        if (!take && ratio <= best_ratio + 1e-12) {
          take = bland ? basis_[i] < basis_[leave] : a > t_(leave + 1, enter);
        }
        if (take) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;

      degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      if (++pivots > kMaxPivots) {
        throw NumericalError("simplex: pivot limit exceeded");
      }
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    const Eigen::Index r = row + 1;
    t_.row(r) /= t_(r, col);
    const Vector column = t_.col(col);
    const Eigen::RowVectorXd pivot_row = t_.row(r);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r || column(i) == 0.0) continue;
      t_.row(i) -= column(i) * pivot_row;
    }
    basis_[row] = static_cast<int>(col);
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult lp_solve(const LpProblem& problem) {
  const Matrix& G = problem.ineq_lhs;
  const Vector& c = problem.objective;
  const auto m = G.rows();
  const auto n = c.size();
  if (G.cols() != n || problem.ineq_rhs.size() != m) {
    throw ConfigError("LP: inconsistent dimensions");
  }

  // Row equilibration; the slack variables absorb the scaling.
  Matrix Gs = G;
  Vector hs = problem.ineq_rhs;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = Gs.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      Gs.row(i) /= s;
      hs(i) /= s;
    }
  }

  // Columns: z+ (n) | z- (n) | slack (m) | artificial (k) | rhs
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (hs(i) < 0.0) art_rows.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(art_rows.size());
  const Eigen::Index ncols = 2 * n + m + k;
  Matrix t = Matrix::Zero(m + 1, ncols + 1);
  std::vector<int> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = hs(i) < 0.0 ? -1.0 : 1.0;
    t.block(i + 1, 0, 1, n) = sign * Gs.row(i);
    t.block(i + 1, n, 1, n) = -sign * Gs.row(i);
    t(i + 1, 2 * n + i) = sign;
    t(i + 1, ncols) = sign * hs(i);
    basis[i] = static_cast<int>(2 * n + i);
  }
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto i = art_rows[a];
    t(i + 1, 2 * n + m + a) = 1.0;
    basis[i] = static_cast<int>(2 * n + m + a);
  }

  Tableau tab(std::move(t), std::move(basis));
  long pivots = 0;
  Matrix& T = tab.table();

  if (k > 0) {
    // Phase 1: maximize -sum(artificials).
    T.row(0).setZero();
    for (Eigen::Index a = 0; a < k; ++a) T(0, 2 * n + m + a) = 1.0;
    for (Eigen::Index a = 0; a < k; ++a) T.row(0) -= T.row(art_rows[a] + 1);
    tab.optimize(ncols, pivots);
    const double phase1 = T(0, ncols);
    if (phase1 < -1e-9 * (1.0 + hs.cwiseAbs().maxCoeff())) {
      return LpResult{LpStatus::kInfeasible, std::nullopt, std::nullopt};
    }
    // Drive remaining artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis()[i] < 2 * n + m) continue;
      for (Eigen::Index j = 0; j < 2 * n + m; ++j) {
        if (std::abs(T(i + 1, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 over the original and slack columns only.
  const Eigen::Index allowed = 2 * n + m;
  T.row(0).setZero();
  T.block(0, 0, 1, n) = -c.transpose();
  T.block(0, n, 1, n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const int b = tab.basis()[i];
    const double coef = T(0, b);
    if (coef != 0.0) T.row(0) -= coef * T.row(i + 1);
  }
  if (!tab.optimize(allowed, pivots)) {
    return LpResult{LpStatus::kUnbounded, std::nullopt, std::nullopt};
  }

  Vector z = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int b = tab.basis()[i];
    if (b < n) {
      z(b) += tab.rhs(i);
    } else if (b < 2 * n) {
      z(b - n) -= tab.rhs(i);
    }
  }
  return LpResult{LpStatus::kOptimal, c.dot(z), z};
}

}  // namespace reap
