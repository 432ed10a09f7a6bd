#include "trivopt/matexp.hpp"

#include <array>
#include <cmath>

namespace trivopt {

namespace {

// Degree thresholds for the double-precision scaling-and-squaring method.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

Matrix add_scaled_identity(const Matrix& a, double c) {
  Matrix out = a;
  for (int i = 0; i < out.rows(); ++i) out(i, i) += c;
  return out;
}

// U (odd part, contains a factor A) and V (even part) of the degree-m Pade
// numerator; exp(A) ~ (V - U)^-1 (V + U).
void pade_uv(const Matrix& a, int m, Matrix& u, Matrix& v) {
  const Matrix a2 = a * a;
  switch (m) {
    case 3: {
      constexpr std::array<double, 4> b{120.0, 60.0, 12.0, 1.0};
      u = a * add_scaled_identity(b[3] * a2, b[1]);
      v = add_scaled_identity(b[2] * a2, b[0]);
      return;
    }
    case 5: {
      constexpr std::array<double, 6> b{30240.0, 15120.0, 3360.0,
                                        420.0,   30.0,    1.0};
      const Matrix a4 = a2 * a2;
      u = a * add_scaled_identity(b[5] * a4 + b[3] * a2, b[1]);
      v = add_scaled_identity(b[4] * a4 + b[2] * a2, b[0]);
      return;
    }
    case 7: {
      constexpr std::array<double, 8> b{17297280.0, 8648640.0, 1995840.0,
                                        277200.0,   25200.0,   1512.0,
                                        56.0,       1.0};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      u = a * add_scaled_identity(b[7] * a6 + b[5] * a4 + b[3] * a2, b[1]);
      v = add_scaled_identity(b[6] * a6 + b[4] * a4 + b[2] * a2, b[0]);
      return;
    }
    case 9: {
      constexpr std::array<double, 10> b{
          17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
          2162160.0,     110880.0,     3960.0,       90.0,        1.0};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      const Matrix a8 = a6 * a2;
      u = a * add_scaled_identity(
                  b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2, b[1]);
      v = add_scaled_identity(b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2,
                              b[0]);
      return;
    }
    case 13: {
      constexpr std::array<double, 14> b{64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
               add_scaled_identity(b[7] * a6 + b[5] * a4 + b[3] * a2, b[1]));
      v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
          add_scaled_identity(b[6] * a6 + b[4] * a4 + b[2] * a2, b[0]);
      return;
    }
    default:
      throw StructureError("pade_uv: unsupported degree");
  }
}

}  // namespace

ExpmReport expm_report(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("expm: matrix must be square");
  if (!a.all_finite()) throw StructureError("expm: non-finite entry");
  const double eta = one_norm(a);

  int degree = 13;
  int squarings = 0;
  if (eta <= kTheta3) {
    degree = 3;
  } else if (eta <= kTheta5) {
    degree = 5;
  } else if (eta <= kTheta7) {
    degree = 7;
  } else if (eta <= kTheta9) {
    degree = 9;
  } else if (eta > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(eta / kTheta13)));
  }

  Matrix scaled = squarings > 0 ? std::ldexp(1.0, -squarings) * a : a;
  Matrix u, v;
  pade_uv(scaled, degree, u, v);
  Matrix value = lu_solve(v - u, v + u);
  for (int s = 0; s < squarings; ++s) value = value * value;
  return {std::move(value), squarings, degree};
}

Matrix expm(const Matrix& a) { return expm_report(a).value; }

Matrix dexpm(const Matrix& a, const Matrix& e) {
  if (a.rows() != a.cols()) throw ShapeError("dexpm: matrix must be square");
  if (!a.same_shape(e)) throw ShapeError("dexpm: shape mismatch");
  const int n = a.rows();
  Matrix block(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      block(i, j) = a(i, j);
      block(i, n + j) = e(i, j);
      block(n + i, n + j) = a(i, j);
    }
  }
  const Matrix big = expm(block);
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = big(i, n + j);
  }
  return out;
}

Matrix expm_grad(const Matrix& a, const Matrix& g) {
  return dexpm(transpose(a), g);
}

Matrix lie_exp_grad(const Matrix& b, const Matrix& a, const Matrix& g) {
  const Matrix alg = lu_solve(b, a);
  const Matrix w = dexpm(transpose(alg), transpose(b) * g);
  return lu_solve(transpose(b), w);
}

Matrix lie_exp_grad_left_invariant(const Matrix& b, const Matrix& a,
                                   const Matrix& g) {
  const Matrix alg = lu_solve(b, a);
  return b * dexpm(transpose(alg), lu_solve(b, g));
}

bool lie_injectivity_check(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("lie_injectivity_check: matrix must be square");
  }
  const double scale = fro_norm(a);
  double sym_resid = 0.0;
  double skew_resid = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const double ds = a(i, j) - a(j, i);
      const double dk = a(i, j) + a(j, i);
      sym_resid += ds * ds;
      skew_resid += dk * dk;
    }
  }
  const double tol = 1e-10 * (1.0 + scale);
  if (std::sqrt(sym_resid) <= tol) {
    return true;  // symmetric, real spectrum
  }
  if (std::sqrt(skew_resid) > tol) {
    throw StructureError(
        "lie_injectivity_check: input is neither symmetric nor "
        "skew-symmetric");
  }
  // Skew-symmetric: eigenvalues are +-i s with s^2 the spectrum of A'A.
  const SymEig eig = sym_eig(transpose(a) * a);
  const double largest = eig.values.empty() ? 0.0 : eig.values.back();
  const double imag_bound = std::sqrt(std::max(0.0, largest));
  constexpr double kPi = 3.14159265358979323846;
  return imag_bound < kPi - 1e-8;
}

}  // namespace trivopt
