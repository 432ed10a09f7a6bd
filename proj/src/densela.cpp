#include "trivopt/densela.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trivopt {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch (" +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
}

void check_square(const Matrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(op) + ": matrix must be square, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

Matrix::Matrix(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, 0.0) {
  if (rows < 0 || cols < 0) throw ShapeError("Matrix: negative dimension");
}

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 0 || cols < 0) throw ShapeError("Matrix: negative dimension");
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw ShapeError("Matrix: data length " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  if (!all_finite()) throw StructureError("Matrix: non-finite entry");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != cols_) {
      throw ShapeError("Matrix: ragged initializer rows");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!all_finite()) throw StructureError("Matrix: non-finite entry");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::vector<double> entries) {
  const int n = static_cast<int>(entries.size());
  return Matrix(n, 1, std::move(entries));
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "add");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] = a.data()[i] + b.data()[i];
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "sub");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] = a.data()[i] - b.data()[i];
  }
  return out;
}

Matrix operator-(const Matrix& a) { return -1.0 * a; }

Matrix operator*(double s, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] = s * a.data()[i];
  }
  return out;
}

Matrix operator*(const Matrix& a, double s) { return s * a; }

Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()));
  }
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

double trace(const Matrix& a) {
  check_square(a, "trace");
  double t = 0.0;
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double fro_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

double fro_inner(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "fro_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    s += a.data()[i] * b.data()[i];
  }
  return s;
}

double one_norm(const Matrix& a) {
  double best = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (int i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

double max_abs(const Matrix& a) {
  double best = 0.0;
  for (double x : a.data()) best = std::max(best, std::abs(x));
  return best;
}

namespace {

// In-place LU with partial pivoting. Returns the permutation parity sign, or
// 0 when a zero pivot was hit (exactly singular). `throw_on_singular`
// additionally enforces the working-precision pivot bound.
int lu_factor(Matrix& a, std::vector<int>& perm, bool throw_on_singular) {
  const int n = a.rows();
  const double anorm = max_abs(a);
  perm.resize(n);
  std::iota(perm.begin(), perm.end(), 0);
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
      sign = -sign;
    }
    const double pivot = a(k, k);
    if (pivot == 0.0 || std::abs(pivot) < 1e-300 * anorm) {
      if (throw_on_singular) {
        throw SingularMatrixError("lu_solve: singular pivot at column " +
                                  std::to_string(k));
      }
      if (pivot == 0.0) return 0;
    }
    for (int i = k + 1; i < n; ++i) {
      a(i, k) /= pivot;
      const double lik = a(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  return sign;
}

}  // namespace

Matrix lu_solve(const Matrix& a, const Matrix& b) {
  check_square(a, "lu_solve");
  if (b.rows() != a.rows()) {
    throw ShapeError("lu_solve: rhs has " + std::to_string(b.rows()) +
                     " rows, expected " + std::to_string(a.rows()));
  }
  Matrix lu = a;
  std::vector<int> perm;
  lu_factor(lu, perm, /*throw_on_singular=*/true);
  const int n = a.rows();
  Matrix x(n, b.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < b.cols(); ++j) x(i, j) = b(perm[i], j);
  }
  // forward then back substitution
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i < n; ++i) {
      const double lik = lu(i, k);
      if (lik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) x(i, j) -= lik * x(k, j);
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    const double pivot = lu(k, k);
    for (int j = 0; j < b.cols(); ++j) x(k, j) /= pivot;
    for (int i = 0; i < k; ++i) {
      const double uik = lu(i, k);
      if (uik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) x(i, j) -= uik * x(k, j);
    }
  }
  return x;
}

double determinant(const Matrix& a) {
  check_square(a, "determinant");
  Matrix lu = a;
  std::vector<int> perm;
  const int sign = lu_factor(lu, perm, /*throw_on_singular=*/false);
  if (sign == 0) return 0.0;
  double det = sign;
  for (int i = 0; i < a.rows(); ++i) det *= lu(i, i);
  return det;
}

namespace {

// Applies the Householder reflector stored in v (rows k..m-1 of column k) to
// columns [0, cols) of m-row matrix x.
void apply_reflector(const std::vector<double>& v, double vtv, int k,
                     Matrix& x) {
  if (vtv == 0.0) return;
  const int m = x.rows();
  for (int j = 0; j < x.cols(); ++j) {
    double dot = 0.0;
    for (int i = k; i < m; ++i) dot += v[i] * x(i, j);
    const double scale = 2.0 * dot / vtv;
    for (int i = k; i < m; ++i) x(i, j) -= scale * v[i];
  }
}

struct HouseholderQR {
  Matrix r;                                 // m x n, upper trapezoid valid
  std::vector<std::vector<double>> vs;      // reflector vectors
  std::vector<double> vtvs;                 // their squared norms
};

HouseholderQR householder_factor(const Matrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  HouseholderQR h{a, {}, {}};
  h.vs.reserve(n);
  h.vtvs.reserve(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> v(m, 0.0);
    double norm = 0.0;
    for (int i = k; i < m; ++i) {
      v[i] = h.r(i, k);
      norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    double vtv = 0.0;
    if (norm > 0.0) {
      const double alpha = v[k] >= 0.0 ? -norm : norm;
      v[k] -= alpha;
      for (int i = k; i < m; ++i) vtv += v[i] * v[i];
      apply_reflector(v, vtv, k, h.r);
      h.r(k, k) = alpha;  // avoid roundoff junk below the diagonal
      for (int i = k + 1; i < m; ++i) h.r(i, k) = 0.0;
    }
    h.vs.push_back(std::move(v));
    h.vtvs.push_back(vtv);
  }
  return h;
}

// Accumulates the columns [col_begin, col_end) of the full Q factor.
Matrix accumulate_q(const HouseholderQR& h, int m, int col_begin,
                    int col_end) {
  Matrix q(m, col_end - col_begin);
  for (int j = col_begin; j < col_end; ++j) q(j, j - col_begin) = 1.0;
  for (int k = static_cast<int>(h.vs.size()) - 1; k >= 0; --k) {
    apply_reflector(h.vs[k], h.vtvs[k], k, q);
  }
  return q;
}

}  // namespace

QRFactors qr_thin(const Matrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  if (m < n) throw ShapeError("qr_thin: requires rows >= cols");
  HouseholderQR h = householder_factor(a);
  Matrix q = accumulate_q(h, m, 0, n);
  Matrix r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) r(i, j) = h.r(i, j);
  }
  // sign convention: non-negative diagonal of r
  for (int k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) {
      for (int j = k; j < n; ++j) r(k, j) = -r(k, j);
      for (int i = 0; i < m; ++i) q(i, k) = -q(i, k);
    }
  }
  return {std::move(q), std::move(r)};
}

Matrix orthonormal_completion(const Matrix& b) {
  const int m = b.rows();
  const int n = b.cols();
  if (m < n) throw ShapeError("orthonormal_completion: requires rows >= cols");
  HouseholderQR h = householder_factor(b);
  return accumulate_q(h, m, n, m);
}

SymEig sym_eig(const Matrix& a) {
  check_square(a, "sym_eig");
  const int n = a.rows();
  const double scale = fro_norm(a);
  {
    double asym = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double d = a(i, j) - a(j, i);
        asym += d * d;
      }
    }
    if (std::sqrt(asym) > 1e-12 * (1.0 + scale)) {
      throw StructureError("sym_eig: input is not symmetric");
    }
  }
  Matrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
  }
  Matrix vecs = Matrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) s += w(i, j) * w(i, j);
      }
    }
    return std::sqrt(s);
  };

  const double tol = 1e-14 * scale;
  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double wip = w(i, p);
          const double wiq = w(i, q);
          w(i, p) = c * wip - s * wiq;
          w(i, q) = s * wip + c * wiq;
        }
        for (int j = 0; j < n; ++j) {
          const double wpj = w(p, j);
          const double wqj = w(q, j);
          w(p, j) = c * wpj - s * wqj;
          w(q, j) = s * wpj + c * wqj;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = vecs(i, p);
          const double viq = vecs(i, q);
          vecs(i, p) = c * vip - s * viq;
          vecs(i, q) = s * vip + c * viq;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return w(i, i) < w(j, j); });
  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = w(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = vecs(i, order[j]);
  }
  return out;
}

namespace {

// One-sided Jacobi on columns for rows >= cols.
SvdFactors svd_tall(const Matrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  Matrix u = a;
  Matrix v = Matrix::identity(n);
  const double scale = fro_norm(a);
  const double tol = 1e-14;

  bool rotated = true;
  for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
    rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) ||
            std::abs(gamma) <= 1e-30 * scale * scale) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double uip = u(i, p);
          const double uiq = u(i, q);
          u(i, p) = c * uip - s * uiq;
          u(i, q) = s * uip + c * uiq;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<double> sigma(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += u(i, j) * u(i, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return sigma[i] > sigma[j]; });

  SvdFactors out;
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  out.sigma.resize(n);
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    out.sigma[j] = sigma[src];
    for (int i = 0; i < n; ++i) out.v(i, j) = v(i, src);
    if (sigma[src] > 1e-300 * (1.0 + scale)) {
      for (int i = 0; i < m; ++i) out.u(i, j) = u(i, src) / sigma[src];
    }
  }
  // complete zero-sigma columns of u against the rest
  for (int j = 0; j < n; ++j) {
    if (out.sigma[j] > 1e-300 * (1.0 + scale)) continue;
    out.sigma[j] = 0.0;
    for (int cand = 0; cand < m; ++cand) {
      std::vector<double> col(m, 0.0);
      col[cand] = 1.0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        double dot = 0.0;
        for (int i = 0; i < m; ++i) dot += out.u(i, c) * col[i];
        for (int i = 0; i < m; ++i) col[i] -= dot * out.u(i, c);
      }
      double norm = 0.0;
      for (double x : col) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0.5) {
        for (int i = 0; i < m; ++i) out.u(i, j) = col[i] / norm;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SvdFactors svd(const Matrix& a) {
  if (a.rows() >= a.cols()) return svd_tall(a);
  SvdFactors t = svd_tall(transpose(a));
  return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

Matrix cholesky(const Matrix& a) {
  check_square(a, "cholesky");
  const int n = a.rows();
  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0) {
      throw StructureError("cholesky: matrix is not positive definite");
    }
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

}  // namespace trivopt
