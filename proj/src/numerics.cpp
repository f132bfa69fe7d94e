#include "reap/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include "reap/errors.hpp"

namespace reap {

void check_dimensions(const Matrix& A, const Matrix& B, const Matrix& C,
                      const Matrix& D) {
  const auto n = A.rows();
  if (n < 1 || A.cols() != n) {
    throw ConfigError("A must be square and non-empty");
  }
  if (B.rows() != n || B.cols() < 1) {
    throw ConfigError("B must have as many rows as A");
  }
  if (C.cols() != n || C.rows() < 1) {
    throw ConfigError("C must have as many columns as A");
  }
  if (D.rows() != C.rows() || D.cols() != B.cols()) {
    throw ConfigError("D must be (rows of C) x (columns of B)");
  }
}

DiscreteLti zoh_discretize(const ContinuousLti& cont, double dt) {
  check_dimensions(cont.Ac, cont.Bc, cont.Cc, cont.Dc);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("sampling period must be positive");
  }
  const auto n = cont.Ac.rows();
  const auto p = cont.Bc.cols();

  // M = [Ac Bc]     exp(M dt) = [A  B]
  //     [ 0  0]                 [0  I]
  Matrix M = Matrix::Zero(n + p, n + p);
  M.topLeftCorner(n, n) = cont.Ac;
  M.topRightCorner(n, p) = cont.Bc;
  const Matrix phi = (M * dt).exp();

  DiscreteLti out;
  out.A = phi.topLeftCorner(n, n);
  out.B = phi.topRightCorner(n, p);
  out.C = cont.Cc;
  out.D = cont.Dc;
  out.dt = dt;
  return out;
}

int numerical_rank(const Matrix& M, int scale) {
  if (M.size() == 0) return 0;
  const double max_col = M.colwise().norm().maxCoeff();
  if (max_col == 0.0) return 0;
  const double tol =
      scale * std::numeric_limits<double>::epsilon() * max_col;
  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  const Matrix R = qr.matrixR().template triangularView<Eigen::Upper>();
  const auto k = std::min(R.rows(), R.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(R(i, i)) > tol) ++rank;
  }
  return rank;
}

bool is_controllable(const Matrix& A, const Matrix& B) {
  const auto n = A.rows();
  const auto p = B.cols();
  Matrix ctrb(n, n * p);
  Matrix block = B;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * p, p) = block;
    block = A * block;
  }
  return numerical_rank(ctrb, static_cast<int>(n)) == n;
}

bool is_observable(const Matrix& C, const Matrix& A) {
  const auto n = A.rows();
  const auto m = C.rows();
  Matrix obsv(n * m, n);
  Matrix block = C;
  for (Eigen::Index i = 0; i < n; ++i) {
    obsv.middleRows(i * m, m) = block;
    block = block * A;
  }
  return numerical_rank(obsv, static_cast<int>(n)) == n;
}

double spectral_radius(const Matrix& M) {
  Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

bool is_symmetric(const Matrix& M) {
  return (M - M.transpose()).norm() <= 1e-10 * (1.0 + M.norm());
}

Matrix riccati_map(const Matrix& A, const Matrix& B, const Matrix& Qx,
                   const Matrix& Qu, const Matrix& Q) {
  const Matrix BtQ = B.transpose() * Q;
  const Matrix S = Qu + BtQ * B;
  const Matrix next =
      A.transpose() * Q * A -
      (BtQ * A).transpose() * S.ldlt().solve(BtQ * A) + Qx;
  return 0.5 * (next + next.transpose());
}

}  // namespace

double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Qx,
                     const Matrix& Qu, const Matrix& Q) {
  return (riccati_map(A, B, Qx, Qu, Q) - Q).norm();
}

Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Qx,
                  const Matrix& Qu) {
  const auto n = A.rows();
  const auto p = B.cols();
  if (A.cols() != n || B.rows() != n || Qx.rows() != n || Qx.cols() != n ||
      Qu.rows() != p || Qu.cols() != p) {
    throw ConfigError("DARE: inconsistent dimensions");
  }
  if (!is_symmetric(Qx)) throw ConfigError("Qx must be symmetric");
  if (!is_symmetric(Qu)) throw ConfigError("Qu must be symmetric");

  // Sylvester's law of inertia: LDL' with no negative pivots means PSD.
  Eigen::LDLT<Matrix> qx_ldlt(Qx);
  if (qx_ldlt.info() != Eigen::Success ||
      (qx_ldlt.vectorD().array() < -1e-12 * (1.0 + Qx.norm())).any()) {
    throw ConfigError("Qx must be positive semidefinite");
  }
  Eigen::LLT<Matrix> qu_llt(Qu);
  if (qu_llt.info() != Eigen::Success) {
    throw ConfigError("Qu must be positive definite");
  }

  constexpr int kMaxIterations = 100000;
  Matrix Q = Qx;
  double residual = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    Matrix next = riccati_map(A, B, Qx, Qu, Q);
    residual = (next - Q).norm();
    Q = std::move(next);
    if (!Q.allFinite()) break;
    if (residual <= 1e-10 * (1.0 + Q.norm())) {
      // One more check against the fixed point we return.
      if (dare_residual(A, B, Qx, Qu, Q) <= 1e-9 * (1.0 + Q.norm())) {
        return Q;
      }
    }
  }
  std::ostringstream msg;
  msg << "DARE value iteration did not converge (residual " << residual
      << ")";
  throw NumericalError(msg.str());
}

Matrix terminal_gain(const Matrix& A, const Matrix& B, const Matrix& Qu,
                     const Matrix& Qn) {
  const Matrix BtQ = B.transpose() * Qn;
  const Matrix S = Qu + BtQ * B;
  const Matrix K = -S.ldlt().solve(BtQ * A);
  const double rho = spectral_radius(A + B * K);
  if (!(rho < 1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "terminal gain is not stabilizing (spectral radius " << rho
        << ")";
    throw NumericalError(msg.str());
  }
  return K;
}

Matrix solve_discrete_lyapunov(const Matrix& Acl) {
  const auto n = Acl.rows();
  if (Acl.cols() != n) throw ConfigError("Lyapunov: matrix must be square");
  if (!(spectral_radius(Acl) < 1.0)) {
    throw NumericalError("Lyapunov: closed-loop matrix is not Schur");
  }
  // vec(Acl' Psi Acl) = (Acl' kron Acl') vec(Psi), column-major vec.
  const Matrix At = Acl.transpose();
  const auto nn = n * n;
  Matrix M(nn, nn);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      M.block(i * n, j * n, n, n) = At(i, j) * At;
    }
  }
  M -= Matrix::Identity(nn, nn);
  Eigen::FullPivLU<Matrix> lu(M);
  if (lu.rank() < nn) {
    throw NumericalError("Lyapunov: singular Kronecker system");
  }
  const Matrix I = Matrix::Identity(n, n);
  const Vector rhs = -Eigen::Map<const Vector>(I.data(), nn);
  const Vector sol = lu.solve(rhs);
  const Matrix Psi = Eigen::Map<const Matrix>(sol.data(), n, n);
  return 0.5 * (Psi + Psi.transpose());
}

}  // namespace reap
