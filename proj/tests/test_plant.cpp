#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "reap/errors.hpp"
#include "reap/numerics.hpp"
#include "reap/plant.hpp"
#include "support/oracles.hpp"

namespace reap {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

Vector V(std::initializer_list<double> v) {
  Vector out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

BoxSet symmetric(int n, double bound) {
  return BoxSet(Vector::Constant(n, -bound), Vector::Constant(n, bound));
}

DiscreteLti double_integrator() {
  DiscreteLti m;
  m.A.resize(2, 2);
  m.A << 1, 0.1, 0, 1;
  m.B.resize(2, 1);
  m.B << 0.005, 0.1;
  m.C.resize(1, 2);
  m.C << 1, 0;
  m.D = Matrix::Zero(1, 1);
  m.dt = 0.1;
  return m;
}

TEST(BoxSet, RejectsInvertedBounds) {
  EXPECT_THROW(BoxSet(V({1.0}), V({0.0})), ConfigError);
  EXPECT_THROW(BoxSet(V({1.0}), V({1.0})), ConfigError);
  EXPECT_THROW(BoxSet(V({0.0, 0.0}), V({1.0})), ConfigError);
}

TEST(BoxSet, ContainsBoundarySemantics) {
  const BoxSet b = symmetric(1, 1.0);
  EXPECT_TRUE(contains(b, V({0.0})));
  EXPECT_TRUE(contains(b, V({1.0})));
  EXPECT_FALSE(contains(b, V({1.0}), 1e-6));
  const BoxSet half(V({-kInf}), V({5.0}));
  EXPECT_FALSE(contains(half, V({1e6})));
  EXPECT_TRUE(contains(half, V({-1e300})));
}

TEST(BoxSet, ContainsIsMonotoneInMargin) {
  std::mt19937 rng(1);
  const BoxSet b(V({-1.0, -2.0}), V({3.0, 0.5}));
  for (int i = 0; i < 1000; ++i) {
    const Vector v = oracle::random_matrix(rng, 2, 1, -3.0, 4.0);
    const double m2 = std::uniform_real_distribution<double>(0, 1)(rng);
    const double m1 = m2 * std::uniform_real_distribution<double>(0, 1)(rng);
    if (contains(b, v, m2)) EXPECT_TRUE(contains(b, v, m1));
  }
}

TEST(Target, ScalarReference) {
  DiscreteLti m{Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 0.5),
                Matrix::Ones(1, 1), Matrix::Zero(1, 1), 1.0};
  const auto t = resolve_target_from_reference(m, symmetric(1, 10),
                                               symmetric(1, 10), V({4.85}));
  EXPECT_NEAR(t.xbar(0), 4.85, 1e-12);
  EXPECT_NEAR(t.ubar(0), 4.85, 1e-12);
}

TEST(Target, ZeroReferenceGivesOrigin) {
  const auto t = resolve_target_from_reference(
      double_integrator(), symmetric(2, 1), symmetric(1, 1), V({0.0}));
  EXPECT_EQ(t.xbar.norm(), 0.0);
  EXPECT_EQ(t.ubar.norm(), 0.0);
}

TEST(Target, DoubleIntegratorReference) {
  const auto m = double_integrator();
  const auto t =
      resolve_target_from_reference(m, symmetric(2, 2), symmetric(1, 1), V({1.0}));
  EXPECT_NEAR(t.xbar(0), 1.0, 1e-12);
  EXPECT_NEAR(t.xbar(1), 0.0, 1e-12);
  EXPECT_NEAR(t.ubar(0), 0.0, 1e-12);
  EXPECT_LE((m.A * t.xbar + m.B * t.ubar - t.xbar).norm(), 1e-12);
}

TEST(Target, ReferenceOnBoundaryIsRejected) {
  EXPECT_THROW(resolve_target_from_reference(double_integrator(),
                                             symmetric(2, 1), symmetric(1, 1),
                                             V({1.0})),
               TargetError);
}

TEST(Target, UnreachableReferenceIsRejected) {
  // Output is a state that no steady state can move: x2 fixed at 0.
  DiscreteLti m{Matrix::Identity(2, 2) * 0.5, Matrix(2, 1), Matrix(1, 2),
                Matrix::Zero(1, 1), 1.0};
  m.B << 1, 0;
  m.C << 0, 1;
  EXPECT_THROW(resolve_target_from_reference(m, symmetric(2, 5),
                                             symmetric(1, 5), V({1.0})),
               TargetError);
}

TEST(Target, EquilibriumWithIntegratorStructure) {
  DiscreteLti m{Matrix(2, 2), Matrix(2, 1), Matrix(1, 2), Matrix::Zero(1, 1),
                0.1};
  m.A << 1, 0.1, 0, 0.9;
  m.B << 0, 0.1;
  m.C << 1, 0;
  const auto t = resolve_target_from_equilibrium(
      m, symmetric(2, 10), symmetric(1, 10), V({4.85, 0.0}));
  EXPECT_NEAR(t.r(0), 4.85, 1e-12);
  EXPECT_NEAR(t.ubar(0), 0.0, 1e-12);
  const auto zero = resolve_target_from_equilibrium(
      m, symmetric(2, 10), symmetric(1, 10), V({0.0, 0.0}));
  EXPECT_EQ(zero.ubar.norm(), 0.0);
  EXPECT_EQ(zero.r.norm(), 0.0);
}

TEST(Target, NonEquilibriumIsRejected) {
  DiscreteLti m{Matrix::Identity(2, 2), Matrix(2, 1), Matrix(1, 2),
                Matrix::Zero(1, 1), 1.0};
  m.A(0, 1) = 1.0;
  m.B << 0, 1;
  m.C << 1, 0;
  // (A - I) x = [x2, 0] must equal -B u = [0, -u]: impossible for x2 != 0.
  EXPECT_THROW(resolve_target_from_equilibrium(
                   m, symmetric(2, 5), symmetric(1, 5), V({1.0, 1.0})),
               TargetError);
}

TEST(Target, ResubstitutionOnRandomInstances) {
  std::mt19937 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    DiscreteLti m;
    m.A = oracle::random_matrix(rng, 3, 3, -0.9, 0.9);
    m.B = oracle::random_matrix(rng, 3, 2);
    m.C = oracle::random_matrix(rng, 2, 3);
    m.D = Matrix::Zero(2, 2);
    const Vector r = oracle::random_matrix(rng, 2, 1, -0.1, 0.1);
    try {
      const auto t = resolve_target_from_reference(m, symmetric(3, 100),
                                                   symmetric(2, 100), r);
      EXPECT_LE((m.A * t.xbar + m.B * t.ubar - t.xbar).cwiseAbs().maxCoeff(),
                1e-8);
      EXPECT_LE((m.C * t.xbar + m.D * t.ubar - r).cwiseAbs().maxCoeff(), 1e-8);
      ++checked;
    } catch (const TargetError&) {
    }
  }
  EXPECT_GT(checked, 900);
}

TEST(Target, MinimumNormAmongSteadyStates) {
  // Two inputs, one output: a one-parameter family of steady states.
  DiscreteLti m{Matrix::Identity(2, 2) * 0.9, Matrix::Identity(2, 2) * 0.1,
                Matrix::Ones(1, 2), Matrix::Zero(1, 2), 0.1};
  const auto t = resolve_target_from_reference(m, symmetric(2, 10),
                                               symmetric(2, 10), V({4.85}));
  Vector z(4);
  z << t.xbar, t.ubar;
  Matrix S(3, 4);
  S << m.A - Matrix::Identity(2, 2), m.B, m.C, m.D;
  const Matrix null = S.fullPivLu().kernel();
  ASSERT_EQ(null.cols(), 1);
  for (double a = -5.0; a <= 5.0; a += 0.01) {
    EXPECT_LE(z.norm(), (z + a * null.col(0)).norm() + 1e-12);
  }
}

TEST(ListConstraints, MatchesDocumentedLayout) {
  const BoxSet X(V({-kInf, -5.0}), V({5.0, kInf}));
  const BoxSet U(V({-kInf, -kInf}), V({10.0, 10.0}));
  const std::string expected =
      "State Constraints:\n"
      "State Constraint 1: x1 <= 5\n"
      "State Constraint 2: x2 <= Inf\n"
      "State Constraint 3: x1 >= -Inf\n"
      "State Constraint 4: x2 >= -5\n"
      "Input Constraints:\n"
      "Input Constraint 1: u1 <= 10\n"
      "Input Constraint 2: u2 <= 10\n";
  const std::string text = list_constraints(X, U);
  EXPECT_EQ(text.substr(0, expected.size()), expected);
  EXPECT_EQ(text.substr(expected.size()),
            "Input Constraint 3: u1 >= -Inf\n"
            "Input Constraint 4: u2 >= -Inf\n");
}

TEST(ListConstraints, ScalarHasFourConstraintLines) {
  const std::string text =
      list_constraints(symmetric(1, 1.0), symmetric(1, 1.0));
  int lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 6);  // two headers and four constraints
  EXPECT_NE(text.find("x1 >= -1"), std::string::npos);
}

TEST(FormatBound, ShortestRoundTrip) {
  EXPECT_EQ(format_bound(0.1), "0.1");
  EXPECT_EQ(format_bound(2.57), "2.57");
  EXPECT_EQ(format_bound(kInf), "Inf");
  EXPECT_EQ(format_bound(-kInf), "-Inf");
}

}  // namespace
}  // namespace reap
