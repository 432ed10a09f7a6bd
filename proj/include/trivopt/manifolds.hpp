#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trivopt/densela.hpp"

namespace trivopt {

struct MembershipError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TangencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ManifoldKind {
  SpecialOrthogonal,   // SO(n): Q'Q = I, det Q = 1
  RealTorus,           // block-diagonal 2x2 rotations, ambient 2n x 2n
  Stiefel,             // St(n, k): B'B = I_k
  Sphere,              // S^n in R^{n+1}
  Hyperbolic,          // hyperboloid model in R^{n+1}
  SymPosDef,           // symmetric positive definite n x n
  SpecialLinear,       // SL(n): det = 1
  GeneralLinearPlus,   // GL+(n): det > 0
};

struct ManifoldSpec {
  ManifoldKind kind{};
  int n = 0;  // size parameter (blocks for the torus, intrinsic dim for
              // sphere/hyperbolic)
  int k = 0;  // Stiefel column count

  static ManifoldSpec special_orthogonal(int n);
  static ManifoldSpec real_torus(int blocks);
  static ManifoldSpec stiefel(int n, int k);
  static ManifoldSpec sphere(int n);
  static ManifoldSpec hyperbolic(int n);
  static ManifoldSpec sym_pos_def(int n);
  static ManifoldSpec special_linear(int n);
  static ManifoldSpec general_linear_plus(int n);

  int ambient_rows() const;
  int ambient_cols() const;
  /// Intrinsic dimension; this is the length of chart coordinate arrays.
  int dim() const;
  std::string name() const;

  bool operator==(const ManifoldSpec& other) const {
    return kind == other.kind && n == other.n && k == other.k;
  }
};

/// Point on a manifold. Derived factors needed by charts and retractions
/// (orthonormal completion, SPD square roots, tangent bases) are computed at
/// construction so points stay immutable and shareable.
class Point {
 public:
  /// Validates membership(value) <= 1e-8 and builds the per-kind caches.
  static Point make(const ManifoldSpec& spec, Matrix value);

  /// Wraps a possibly off-manifold matrix without validation or caches; for
  /// finite-difference probes of objectives only.
  static Point make_unchecked(const ManifoldSpec& spec, Matrix value);

  const ManifoldSpec& manifold() const { return spec_; }
  const Matrix& value() const { return value_; }

  // Stiefel: columns completing value to an orthogonal basis.
  const Matrix& basis_completion() const { return basis_completion_; }
  // SPD: cached symmetric square roots, eigendecomposition, Cholesky factor.
  const Matrix& sqrt_factor() const { return sqrt_; }
  const Matrix& inv_sqrt_factor() const { return inv_sqrt_; }
  const SymEig& eig() const { return eig_; }
  const Matrix& chol_factor() const { return chol_; }
  // Sphere / hyperbolic: orthonormal (resp. H-orthonormal) tangent basis,
  // one column per chart coordinate.
  const Matrix& tangent_basis() const { return tangent_basis_; }

 private:
  Point() = default;
  ManifoldSpec spec_;
  Matrix value_;
  Matrix basis_completion_;
  Matrix sqrt_, inv_sqrt_, chol_;
  SymEig eig_;
  Matrix tangent_basis_;
};

/// Unconstrained chart coordinates of a tangent vector at some base point.
struct TangentCoords {
  ManifoldSpec manifold;
  std::vector<double> coords;  // length manifold.dim()

  static TangentCoords zero(const ManifoldSpec& spec) {
    return {spec, std::vector<double>(static_cast<std::size_t>(spec.dim()))};
  }
};

/// Scalar violation of the manifold's defining equations; 0 on the manifold.
double membership(const ManifoldSpec& spec, const Matrix& x);

/// Linear chart: coordinates -> ambient tangent at base.
Matrix coords_to_ambient(const Point& base, const TangentCoords& t);
Matrix coords_to_ambient(const Point& base, std::span<const double> coords);

/// Inverse chart; the tangent relation must hold within 1e-8.
TangentCoords ambient_to_coords(const Point& base,
                                const Matrix& ambient_tangent);

/// Frobenius adjoint of coords_to_ambient: entry k is the inner product of
/// ambient_grad with the chart image of the k-th coordinate direction.
std::vector<double> chart_adjoint(const Point& base,
                                  const Matrix& ambient_grad);

/// Deterministic sample; membership violation <= 1e-10 for all kinds.
Point random_point(const ManifoldSpec& spec, std::uint64_t seed);

// Chart structure helpers, shared with the trivialization kernels.
// For the group-like kinds (SO, torus, SL, GL+) the structure matrix is the
// Lie-algebra element A with ambient tangent B A; for SPD it is the symmetric
// A with ambient tangent B^{1/2} A B^{1/2}.
Matrix structure_from_coords(const ManifoldSpec& spec,
                             std::span<const double> coords);
/// Frobenius adjoint of structure_from_coords applied to a matrix gradient.
std::vector<double> coords_from_structure_gradient(const ManifoldSpec& spec,
                                                   const Matrix& grad);
/// Stiefel chart split: so(k) block and the free (n-k) x k block.
std::pair<Matrix, Matrix> stiefel_parts_from_coords(
    const ManifoldSpec& spec, std::span<const double> coords);

}  // namespace trivopt
