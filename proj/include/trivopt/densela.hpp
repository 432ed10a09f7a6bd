#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace trivopt {

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StructureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major real matrix. Column vectors are n x 1.
class Matrix {
 public:
  Matrix() = default;
  /// Zero matrix of the given shape.
  Matrix(int rows, int cols);
  /// Takes ownership of row-major data; rejects wrong length and non-finite
  /// entries.
  Matrix(int rows, int cols, std::vector<double> data);
  /// Row-wise literal, e.g. Matrix{{1,2},{3,4}}; rejects ragged rows and
  /// non-finite entries.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix column(std::vector<double> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool all_finite() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(double s, const Matrix& a);
Matrix operator*(const Matrix& a, double s);
Matrix operator*(const Matrix& a, const Matrix& b);

/// Standard product; throws ShapeError unless a.cols == b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
double trace(const Matrix& a);

double fro_norm(const Matrix& a);
/// tr(a' b); throws ShapeError on shape mismatch.
double fro_inner(const Matrix& a, const Matrix& b);
/// Maximum absolute column sum.
double one_norm(const Matrix& a);
double max_abs(const Matrix& a);

struct QRFactors {
  Matrix q;  // n x k, orthonormal columns
  Matrix r;  // k x k, upper triangular, non-negative diagonal
};

struct SymEig {
  std::vector<double> values;  // ascending
  Matrix vectors;              // orthonormal columns
};

struct SvdFactors {
  Matrix u;
  std::vector<double> sigma;  // non-negative, descending
  Matrix v;
};

/// Solves a x = b with partial-pivoting LU. Throws SingularMatrixError when a
/// pivot falls below working precision.
Matrix lu_solve(const Matrix& a, const Matrix& b);

/// Determinant via LU; returns 0 for exactly singular input instead of
/// throwing.
double determinant(const Matrix& a);

/// Householder thin QR for rows >= cols. Reflector signs are flipped so the
/// diagonal of r is non-negative, which makes the factorization deterministic.
QRFactors qr_thin(const Matrix& a);

/// Columns completing an orthonormal b (n x k) to an orthogonal n x n basis;
/// returns the n x (n-k) block.
Matrix orthonormal_completion(const Matrix& b);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Input asymmetry
/// beyond 1e-12 * (1 + |a|_F) is an error; smaller asymmetry is symmetrized
/// away.
SymEig sym_eig(const Matrix& a);

/// One-sided Jacobi SVD, any shape. Thin factors with k = min(rows, cols).
SvdFactors svd(const Matrix& a);

/// Lower Cholesky factor; throws StructureError when the matrix is not
/// positive definite.
Matrix cholesky(const Matrix& a);

}  // namespace trivopt
