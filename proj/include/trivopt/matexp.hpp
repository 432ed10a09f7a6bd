#pragma once

#include "trivopt/densela.hpp"

namespace trivopt {

struct ExpmReport {
  Matrix value;     // e^A
  int squarings;    // >= 0
  int pade_degree;  // one of 3, 5, 7, 9, 13
};

/// Scaling-and-squaring Pade approximation of e^A.
Matrix expm(const Matrix& a);
ExpmReport expm_report(const Matrix& a);

/// Frechet derivative L(A, E) of the matrix exponential, computed as the
/// top-right block of exp([[A, E], [0, A]]).
Matrix dexpm(const Matrix& a, const Matrix& e);

/// Gradient of f(e^A) given the ambient gradient g = grad f(e^A):
/// returns dexpm(A', g), the Frobenius adjoint of L(A, .) applied to g.
Matrix expm_grad(const Matrix& a, const Matrix& g);

/// Gradient of y -> f(B exp(B^-1 y)) at the ambient tangent a, canonical
/// metric; b must be invertible.
Matrix lie_exp_grad(const Matrix& b, const Matrix& a, const Matrix& g);

/// Left-invariant-metric variant of lie_exp_grad: the adjoint is taken with
/// respect to <X, Y>_B = tr((B^-1 X)' B^-1 Y) on both sides.
Matrix lie_exp_grad_left_invariant(const Matrix& b, const Matrix& a,
                                   const Matrix& g);

/// True iff every eigenvalue of a has |Im(lambda)| < pi - 1e-8. Restricted to
/// symmetric and skew-symmetric inputs, whose spectra are computable with the
/// symmetric eigensolver; anything else is a StructureError.
bool lie_injectivity_check(const Matrix& a);

}  // namespace trivopt
