#pragma once

#include <Eigen/Core>

namespace reap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct ContinuousLti {
  Matrix Ac;
  Matrix Bc;
  Matrix Cc;
  Matrix Dc;
};

/// x(k+1) = A x(k) + B u(k),  y(k) = C x(k) + D u(k).
struct DiscreteLti {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  double dt = 1.0;

  int states() const { return static_cast<int>(A.rows()); }
  int inputs() const { return static_cast<int>(B.cols()); }
  int outputs() const { return static_cast<int>(C.rows()); }
};

/// Throws ConfigError unless the four matrices agree on n, p, m.
void check_dimensions(const Matrix& A, const Matrix& B, const Matrix& C,
                      const Matrix& D);

}  // namespace reap
