#pragma once

#include <cstdint>
#include <string>

#include "trivopt/manifolds.hpp"

namespace trivopt {

enum class TrivKind {
  LieExp,         // B exp(B^-1 y) on matrix Lie groups
  RiemannianExp,  // geodesics of the per-manifold metric
  Cayley,         // (I + A)(I - A)^-1, based at B
  Projector,      // metric projection of base + tangent
  Squaring,       // SPD square-root perturbation squared
  Cholesky,       // SPD Cholesky-factor perturbation
};

std::string to_string(TrivKind kind);

/// Which kinds are defined for which manifolds.
bool is_supported(TrivKind kind, ManifoldKind manifold);

struct Trivialization {
  TrivKind kind;
  ManifoldSpec manifold;

  /// Throws StructureError for unsupported (kind, manifold) pairs.
  Trivialization(TrivKind kind, ManifoldSpec manifold);
};

struct PullbackGradient {
  std::vector<double> coords_grad;  // length manifold.dim()
};

/// Evaluates the map at chart coordinates y around base. The result is a
/// valid Point (membership within 1e-8); value at y = 0 returns base.
Point value(const Trivialization& t, const Point& base,
            const TangentCoords& y);

/// Gradient of y -> f(value(t, base, y)) in chart coordinates, where
/// ambient_grad is the Euclidean gradient of f at value(t, base, y).
PullbackGradient pullback_grad(const Trivialization& t, const Point& base,
                               const TangentCoords& y,
                               const Matrix& ambient_grad);

/// First-order retraction diagnostic: max over random chart directions of
/// the difference between the finite-difference differential at zero and the
/// chart image. Should be <= 1e-4 * (1 + |base|).
double is_retraction_check(const Trivialization& t, const Point& base,
                           std::uint64_t seed);

/// SVD-based projection onto SO(n). Inputs with negative determinant are
/// fixed by flipping the last left singular vector; singular input is an
/// error.
Matrix project_to_special_orthogonal(const Matrix& x);

/// The raw Cayley transform (I + A)(I - A)^-1 from skew matrices to SO(n).
/// Its differential at zero is twice the identity, so the Cayley
/// trivialization evaluates it at half the chart tangent to satisfy the
/// retraction axioms.
Matrix cayley_transform(const Matrix& skew);

}  // namespace trivopt
