#include "reap/projection.hpp"

#include <algorithm>
#include <vector>

#include <Eigen/QR>

#include "reap/errors.hpp"

namespace reap {

Vector project_onto_polytope(const Matrix& A, const Vector& b,
                             const Vector& start, const Vector& target) {
  if (A.cols() != start.size() || target.size() != start.size() ||
      b.size() != A.rows()) {
    throw ConfigError("projection: inconsistent dimensions");
  }
  const auto m = A.rows();
  const Vector rhs = b.cwiseMax(A * start);
  const double scale = 1.0 + target.cwiseAbs().maxCoeff() +
                       start.cwiseAbs().maxCoeff();
  Vector v = start;
  std::vector<Eigen::Index> working;
  std::vector<char> in_working(m, 0);

  const long max_iter = 20 * (m + start.size()) + 50;
  for (long it = 0; it < max_iter; ++it) {
    const auto k = static_cast<Eigen::Index>(working.size());
    Vector goal = target;
    Vector mu;
    if (k > 0) {
      Matrix Gw(k, A.cols());
      Vector bw(k);
      for (Eigen::Index j = 0; j < k; ++j) {
        Gw.row(j) = A.row(working[j]);
        bw(j) = rhs(working[j]);
      }
      // Closest point of the working-set face; the pseudo-inverse copes
      // with degenerate (linearly dependent) working rows.
      mu = (Gw * Gw.transpose())
               .completeOrthogonalDecomposition()
               .solve(Gw * target - bw);
      goal = target - Gw.transpose() * mu;
    }
    const Vector step = goal - v;
    if (step.norm() <= 1e-14 * scale) {
      if (k == 0) return v;
      Eigen::Index worst = -1;
      double most_negative = -1e-12 * scale;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (mu(j) < most_negative) {
          most_negative = mu(j);
          worst = j;
        }
      }
      if (worst < 0) return v;
      in_working[working[worst]] = 0;
      working.erase(working.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    const Vector As = A * step;
    const Vector Av = A * v;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in_working[i] || As(i) <= 1e-15 * scale) continue;
      const double a = std::max((rhs(i) - Av(i)) / As(i), 0.0);
      if (a < alpha) {
        alpha = a;
        blocking = i;
      }
    }
    v += alpha * step;
    if (blocking >= 0) {
      working.push_back(blocking);
      in_working[blocking] = 1;
    }
  }
  return v;
}

}  // namespace reap
