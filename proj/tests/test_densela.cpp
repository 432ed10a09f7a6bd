#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "trivopt/densela.hpp"
#include "trivopt/rng.hpp"

using namespace trivopt;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols);
  for (auto& x : m.data()) x = rng.gaussian();
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return max_abs(a - b);
}

}  // namespace

TEST_CASE("matmul basics") {
  const Matrix a = random_matrix(3, 3, 1);
  CHECK(max_abs_diff(Matrix::identity(3) * a, a) == 0.0);

  const Matrix p = Matrix{{1, 2}, {3, 4}} * Matrix{{0, 1}, {1, 0}};
  CHECK(max_abs_diff(p, Matrix{{2, 1}, {4, 3}}) == 0.0);

  CHECK(max_abs(a * Matrix(3, 2)) == 0.0);

  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 2)), ShapeError);
}

TEST_CASE("matmul associativity on random triples") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix a = random_matrix(4, 6, 100 + s);
    const Matrix b = random_matrix(6, 5, 200 + s);
    const Matrix c = random_matrix(5, 3, 300 + s);
    const Matrix lhs = (a * b) * c;
    const Matrix rhs = a * (b * c);
    CHECK(fro_norm(lhs - rhs) <= 1e-12 * (1.0 + fro_norm(lhs)));
  }
}

TEST_CASE("matrix construction validates entries") {
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
  CHECK_THROWS_AS(
      Matrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}),
      StructureError);
  CHECK_THROWS_AS(
      Matrix(1, 1, {std::numeric_limits<double>::infinity()}),
      StructureError);
}

TEST_CASE("lu_solve examples") {
  const Matrix b = random_matrix(4, 2, 7);
  CHECK(max_abs_diff(lu_solve(Matrix::identity(4), b), b) == 0.0);

  const Matrix x = lu_solve(Matrix{{2, 0}, {0, 4}}, Matrix{{2}, {8}});
  CHECK(max_abs_diff(x, Matrix{{1}, {2}}) == 0.0);

  CHECK_THROWS_AS(lu_solve(Matrix(2, 2), random_matrix(2, 1, 3)),
                  SingularMatrixError);
}

TEST_CASE("lu_solve residual on well-conditioned systems") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const int n = 3 + static_cast<int>(s % 10);
    // condition <= 1e6 by construction: orthogonal factors, bounded spectrum
    const Matrix q1 = qr_thin(random_matrix(n, n, 500 + s)).q;
    const Matrix q2 = qr_thin(random_matrix(n, n, 600 + s)).q;
    Matrix d(n, n);
    SplitMix64 rng(700 + s);
    for (int i = 0; i < n; ++i) d(i, i) = 1.0 + 99.0 * rng.uniform();
    const Matrix a = q1 * d * q2;
    const Matrix b = random_matrix(n, 2, 800 + s);
    const Matrix x = lu_solve(a, b);
    CHECK(fro_norm(a * x - b) <= 1e-10 * fro_norm(b));
  }
}

TEST_CASE("qr_thin examples") {
  const QRFactors qi = qr_thin(Matrix::identity(4));
  CHECK(max_abs_diff(qi.q, Matrix::identity(4)) == 0.0);
  CHECK(max_abs_diff(qi.r, Matrix::identity(4)) == 0.0);

  const QRFactors qe = qr_thin(Matrix{{1}, {0}, {0}});
  CHECK(max_abs_diff(qe.q, Matrix{{1}, {0}, {0}}) <= 1e-15);
  CHECK(qe.r(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

  const QRFactors qp = qr_thin(Matrix{{3}, {4}});
  CHECK(qp.r(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(qp.q(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(qp.q(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("qr_thin properties on random input") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const int n = 2 + static_cast<int>((7 * s) % 49);
    const int k = 1 + static_cast<int>(s % static_cast<std::uint64_t>(n));
    SplitMix64 rng(900 + s);
    Matrix a(n, k);
    for (auto& x : a.data()) x = 2.0 * rng.uniform() - 1.0;
    const QRFactors f = qr_thin(a);
    CHECK(fro_norm(f.q * f.r - a) <= 1e-12 * fro_norm(a));
    CHECK(fro_norm(transpose(f.q) * f.q - Matrix::identity(k)) <= 1e-12);
    for (int i = 0; i < k; ++i) {
      CHECK(f.r(i, i) >= 0.0);
      for (int j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
    }
  }
}

TEST_CASE("qr_thin tolerates rank deficiency") {
  Matrix a(4, 3);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;  // column 1 = 2 * column 0, column 2 = 0
  const QRFactors f = qr_thin(a);
  CHECK(fro_norm(f.q * f.r - a) <= 1e-12 * (1.0 + fro_norm(a)));
  CHECK(f.r(2, 2) == 0.0);
}

TEST_CASE("orthonormal_completion spans the complement") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const int n = 6;
    const int k = 2 + static_cast<int>(s % 3);
    const Matrix b = qr_thin(random_matrix(n, k, 40 + s)).q;
    const Matrix c = orthonormal_completion(b);
    REQUIRE(c.rows() == n);
    REQUIRE(c.cols() == n - k);
    CHECK(fro_norm(transpose(c) * c - Matrix::identity(n - k)) <= 1e-12);
    CHECK(fro_norm(transpose(b) * c) <= 1e-12);
  }
}

TEST_CASE("sym_eig examples") {
  const SymEig d = sym_eig(Matrix{{3, 0}, {0, 1}});
  CHECK(d.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(3.0).epsilon(1e-14));

  const SymEig o = sym_eig(Matrix{{0, 1}, {1, 0}});
  CHECK(o.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(o.values[1] == doctest::Approx(1.0).epsilon(1e-14));

  const SymEig e = sym_eig(Matrix::identity(3));
  for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  // vectors form an orthonormal basis; for the identity every basis works
  CHECK(fro_norm(transpose(e.vectors) * e.vectors - Matrix::identity(3)) <=
        1e-12);

  CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), ShapeError);
  CHECK_THROWS_AS(sym_eig(Matrix{{0, 1}, {0, 0}}), StructureError);
}

TEST_CASE("sym_eig reconstruction on random symmetric input") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int n = 2 + static_cast<int>((3 * s) % 29);
    const Matrix g = random_matrix(n, n, 1000 + s);
    const Matrix a = 0.5 * (g + transpose(g));
    const SymEig e = sym_eig(a);
    Matrix lam(n, n);
    for (int i = 0; i < n; ++i) lam(i, i) = e.values[i];
    CHECK(fro_norm(transpose(e.vectors) * e.vectors - Matrix::identity(n)) <=
          1e-12);
    CHECK(fro_norm(a * e.vectors - e.vectors * lam) <=
          1e-10 * (1.0 + fro_norm(a)));
    for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] <= e.values[i + 1]);
  }
}

TEST_CASE("svd examples") {
  const SvdFactors si = svd(Matrix::identity(3));
  for (double s : si.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));

  const SvdFactors sd = svd(Matrix{{3, 0}, {0, -2}});
  CHECK(sd.sigma[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sd.sigma[1] == doctest::Approx(2.0).epsilon(1e-14));

  const SvdFactors sz = svd(Matrix(3, 2));
  for (double s : sz.sigma) CHECK(s == 0.0);
  CHECK(fro_norm(transpose(sz.u) * sz.u - Matrix::identity(2)) <= 1e-12);
}

TEST_CASE("svd reconstruction on random input") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int rows = 2 + static_cast<int>((5 * s) % 29);
    const int cols = 2 + static_cast<int>((3 * s) % 29);
    const Matrix a = random_matrix(rows, cols, 2000 + s);
    const SvdFactors f = svd(a);
    const int k = std::min(rows, cols);
    Matrix sig(k, k);
    for (int i = 0; i < k; ++i) sig(i, i) = f.sigma[i];
    CHECK(fro_norm(f.u * sig * transpose(f.v) - a) <=
          1e-10 * (1.0 + fro_norm(a)));
    CHECK(fro_norm(transpose(f.u) * f.u - Matrix::identity(k)) <= 1e-12);
    CHECK(fro_norm(transpose(f.v) * f.v - Matrix::identity(k)) <= 1e-12);
    for (int i = 0; i + 1 < k; ++i) CHECK(f.sigma[i] >= f.sigma[i + 1]);
    for (int i = 0; i < k; ++i) CHECK(f.sigma[i] >= 0.0);
  }
}

TEST_CASE("frobenius norm and inner product") {
  CHECK(fro_inner(Matrix::identity(2), Matrix::identity(2)) == 2.0);
  CHECK(fro_norm(Matrix{{3, 4}, {0, 0}}) == doctest::Approx(5.0));

  const Matrix a = random_matrix(3, 4, 11);
  const Matrix b = random_matrix(3, 4, 12);
  CHECK(fro_inner(a, b) == fro_inner(b, a));
  CHECK(fro_inner(a, a) ==
        doctest::Approx(fro_norm(a) * fro_norm(a)).epsilon(1e-14));
  CHECK_THROWS_AS(fro_inner(a, Matrix(4, 3)), ShapeError);
}

TEST_CASE("determinant and cholesky") {
  CHECK(determinant(Matrix::identity(3)) == 1.0);
  CHECK(determinant(Matrix{{2, 0}, {0, 3}}) == doctest::Approx(6.0));
  CHECK(determinant(Matrix(2, 2)) == 0.0);
  CHECK(determinant(Matrix{{0, 1}, {1, 0}}) == doctest::Approx(-1.0));

  const Matrix g = random_matrix(4, 4, 77);
  const Matrix spd = g * transpose(g) + 0.1 * Matrix::identity(4);
  const Matrix l = cholesky(spd);
  CHECK(fro_norm(l * transpose(l) - spd) <= 1e-12 * (1.0 + fro_norm(spd)));
  CHECK_THROWS_AS(cholesky(Matrix{{1, 0}, {0, -1}}), StructureError);
}
