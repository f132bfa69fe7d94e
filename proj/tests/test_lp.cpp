#include <gtest/gtest.h>

#include <random>

#include "reap/lp.hpp"
#include "support/oracles.hpp"

namespace reap {
namespace {

LpProblem make(Vector c, Matrix G, Vector h) {
  return LpProblem{std::move(c), std::move(G), std::move(h)};
}

TEST(Lp, SingleVariable) {
  Matrix G(2, 1);
  G << 1, -1;
  Vector h(2);
  h << 3, 0;
  const auto r = lp_solve(make(Vector::Ones(1), G, h));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(*r.optimum, 3.0, 1e-12);
}

TEST(Lp, BoxVertex) {
  Matrix G(4, 2);
  G << 1, 0, 0, 1, -1, 0, 0, -1;
  Vector h(4);
  h << 1, 1, 0, 0;
  const auto r = lp_solve(make(Vector::Ones(2), G, h));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(*r.optimum, 2.0, 1e-12);
  EXPECT_NEAR((*r.argmax)(0), 1.0, 1e-12);
  EXPECT_NEAR((*r.argmax)(1), 1.0, 1e-12);
}

TEST(Lp, Infeasible) {
  Matrix G(2, 1);
  G << 1, -1;
  Vector h(2);
  h << 1, -2;
  EXPECT_EQ(lp_solve(make(Vector::Ones(1), G, h)).status,
            LpStatus::kInfeasible);
}

TEST(Lp, Unbounded) {
  Matrix G(1, 1);
  G << -1;
  Vector h(1);
  h << 0;
  EXPECT_EQ(lp_solve(make(Vector::Ones(1), G, h)).status,
            LpStatus::kUnbounded);
}

TEST(Lp, NegativeOptimumNeedsPhaseOne) {
  // x >= 2, x <= 5, maximize -x -> -2
  Matrix G(2, 1);
  G << -1, 1;
  Vector h(2);
  h << -2, 5;
  const auto r = lp_solve(make(-Vector::Ones(1), G, h));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(*r.optimum, -2.0, 1e-12);
}

TEST(Lp, DegenerateVertex) {
  // Several constraints meeting at the optimum.
  Matrix G(5, 2);
  G << 1, 0, 0, 1, 1, 1, 2, 1, 1, 2;
  Vector h(5);
  h << 1, 1, 2, 3, 3;
  const auto r = lp_solve(make(Vector::Ones(2), G, h));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(*r.optimum, 2.0, 1e-10);
}

TEST(Lp, MatchesVertexEnumeration) {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> dn(1, 3);
  std::uniform_int_distribution<int> dm(0, 3);
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = dn(rng);
    const int extra = dm(rng);
    // A bounding box keeps every instance bounded; extra random rows may
    // make it infeasible.
    Matrix G(2 * n + extra, n);
    Vector h(2 * n + extra);
    G.topRows(n) = Matrix::Identity(n, n);
    G.middleRows(n, n) = -Matrix::Identity(n, n);
    h.head(2 * n) = oracle::random_matrix(rng, 2 * n, 1, -0.5, 2.0);
    G.bottomRows(extra) = oracle::random_matrix(rng, extra, n);
    h.tail(extra) = oracle::random_matrix(rng, extra, 1, -1.0, 1.0);
    const Vector c = oracle::random_matrix(rng, n, 1);
    const auto expected = oracle::lp_by_vertices(c, G, h);
    const auto r = lp_solve(make(c, G, h));
    if (!expected) {
      EXPECT_EQ(r.status, LpStatus::kInfeasible) << "trial " << trial;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(*r.optimum, *expected, 1e-7) << "trial " << trial;
    EXPECT_LE((G * *r.argmax - h).maxCoeff(), 1e-9);
  }
  EXPECT_GT(infeasible, 0);
}

}  // namespace
}  // namespace reap
