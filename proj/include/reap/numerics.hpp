#pragma once

#include "reap/lti.hpp"

namespace reap {

/// Zero-order-hold discretization with sampling period dt (seconds).
///
/// A = exp(Ac dt); B is read off the top-right block of
/// exp([[Ac, Bc], [0, 0]] dt), which avoids quadrature.
DiscreteLti zoh_discretize(const ContinuousLti& cont, double dt);

/// Numerical rank from a column-pivoted Householder QR. Diagonal entries of
/// R below scale * eps * (largest column norm) count as zero.
int numerical_rank(const Matrix& M, int scale);

bool is_controllable(const Matrix& A, const Matrix& B);
bool is_observable(const Matrix& C, const Matrix& A);

/// Largest eigenvalue modulus.
double spectral_radius(const Matrix& M);

/// Terminal weight from the discrete algebraic Riccati equation
///   Q = A'QA - (A'QB)(Qu + B'QB)^{-1}(B'QA) + Qx
/// by value iteration from Q = Qx. Qx must be symmetric PSD and Qu
/// symmetric PD; violations throw ConfigError. Throws NumericalError if the
/// relative residual does not fall below 1e-9 within 1e5 iterations.
Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Qx,
                  const Matrix& Qu);

/// Frobenius norm of the DARE residual at Q.
double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Qx,
                     const Matrix& Qu, const Matrix& Q);

/// K = -(Qu + B'QnB)^{-1} B'QnA. Throws NumericalError when A + BK is not
/// Schur (spectral radius >= 1 - 1e-9).
Matrix terminal_gain(const Matrix& A, const Matrix& B, const Matrix& Qu,
                     const Matrix& Qn);

/// Psi solving Acl' Psi Acl - Psi = -I through the Kronecker form.
Matrix solve_discrete_lyapunov(const Matrix& Acl);

}  // namespace reap
