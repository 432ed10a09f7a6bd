#include "trivopt/triv.hpp"

#include <algorithm>
#include <cmath>

#include "trivopt/matexp.hpp"
#include "trivopt/rng.hpp"

namespace trivopt {

namespace {

bool is_group(ManifoldKind m) {
  return m == ManifoldKind::SpecialOrthogonal ||
         m == ManifoldKind::RealTorus || m == ManifoldKind::SpecialLinear ||
         m == ManifoldKind::GeneralLinearPlus;
}

double hyperbolic_inner(const Matrix& x, const Matrix& y) {
  const int m = x.rows();
  double s = 0.0;
  for (int i = 0; i < m - 1; ++i) s += x(i, 0) * y(i, 0);
  return s - x(m - 1, 0) * y(m - 1, 0);
}

// sin(t)/t and cosine with small-argument series guards.
double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}
double sinhc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 + t * t / 6.0;
  return std::sinh(t) / t;
}
// d/dt [sin(t)/t] / t, finite at 0.
double dsinc_over_t(double t) {
  if (std::abs(t) < 1e-4) return -1.0 / 3.0 + t * t / 30.0;
  return (t * std::cos(t) - std::sin(t)) / (t * t * t);
}
double dsinhc_over_t(double t) {
  if (std::abs(t) < 1e-4) return 1.0 / 3.0 + t * t / 30.0;
  return (t * std::cosh(t) - std::sinh(t)) / (t * t * t);
}

// Solves sqrt(B) S + S sqrt(B) = W in the eigenbasis of B.
Matrix sqrt_sylvester(const Point& base, const Matrix& w) {
  const SymEig& eig = base.eig();
  const Matrix& vecs = eig.vectors;
  const Matrix wp = transpose(vecs) * w * vecs;
  Matrix s(w.rows(), w.cols());
  for (int i = 0; i < w.rows(); ++i) {
    for (int j = 0; j < w.cols(); ++j) {
      s(i, j) = wp(i, j) /
                (std::sqrt(eig.values[i]) + std::sqrt(eig.values[j]));
    }
  }
  return vecs * s * transpose(vecs);
}

// Lower-triangular mask with halved diagonal; its own Frobenius adjoint.
Matrix tril_half_diag(const Matrix& w) {
  Matrix out(w.rows(), w.cols());
  for (int i = 0; i < w.rows(); ++i) {
    for (int j = 0; j < i; ++j) out(i, j) = w(i, j);
    out(i, i) = 0.5 * w(i, i);
  }
  return out;
}

// The Cholesky-factor perturbation matching a given ambient tangent to first
// order: Y = L0 (tril(W) + diag(W)/2), W = L0^-1 tangent L0^-T.
Matrix chol_perturbation(const Point& base, const Matrix& ambient) {
  const Matrix& l0 = base.chol_factor();
  const Matrix w0 = lu_solve(l0, ambient);
  const Matrix w = transpose(lu_solve(l0, transpose(w0)));
  return l0 * tril_half_diag(w);
}

struct StiefelGeodesicParts {
  Matrix left;   // [B Q], n x 2k
  Matrix block;  // 2k x 2k exponent argument
};

StiefelGeodesicParts stiefel_geodesic_parts(const Point& base,
                                            const Matrix& a,
                                            const Matrix& ambient) {
  const Matrix& b = base.value();
  const int n = b.rows();
  const int k = b.cols();
  const Matrix residual = ambient - b * (transpose(b) * ambient);
  const QRFactors qr = qr_thin(residual);

  Matrix left(n, 2 * k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      left(i, j) = b(i, j);
      left(i, k + j) = qr.q(i, j);
    }
  }
  Matrix block(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      block(i, j) = a(i, j);
      block(i, k + j) = -qr.r(j, i);  // -R' keeps the exponent skew
      block(k + i, k + j) = 0.0;
      block(k + i, j) = qr.r(i, j);
    }
  }
  return {std::move(left), std::move(block)};
}

Matrix value_matrix(const Trivialization& t, const Point& base,
                    std::span<const double> coords);

// Central finite differences of the value map contracted with the ambient
// gradient; used where no closed-form adjoint is implemented. At y = 0 the
// differential of a retraction is the chart itself, so the exact adjoint is
// taken there.
std::vector<double> pullback_fd(const Trivialization& t, const Point& base,
                                const TangentCoords& y,
                                const Matrix& ambient_grad) {
  bool at_zero = true;
  for (double c : y.coords) {
    if (c != 0.0) {
      at_zero = false;
      break;
    }
  }
  if (at_zero) return chart_adjoint(base, ambient_grad);

  const double h = 1e-5;
  std::vector<double> coords(y.coords);
  std::vector<double> out(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double saved = coords[i];
    coords[i] = saved + h;
    const Matrix plus = value_matrix(t, base, coords);
    coords[i] = saved - h;
    const Matrix minus = value_matrix(t, base, coords);
    coords[i] = saved;
    out[i] = fro_inner(ambient_grad, plus - minus) / (2.0 * h);
  }
  return out;
}

Matrix value_matrix(const Trivialization& t, const Point& base,
                    std::span<const double> coords) {
  const ManifoldSpec& spec = t.manifold;
  const Matrix& b = base.value();
  switch (t.kind) {
    case TrivKind::LieExp:
      return b * expm(structure_from_coords(spec, coords));

    case TrivKind::RiemannianExp:
      switch (spec.kind) {
        case ManifoldKind::SpecialOrthogonal:
        case ManifoldKind::RealTorus: {
          // reconstruct the algebra element from the ambient tangent; agrees
          // with LieExp up to roundoff
          const Matrix ambient = coords_to_ambient(base, coords);
          return b * expm(transpose(b) * ambient);
        }
        case ManifoldKind::SpecialLinear:
        case ManifoldKind::GeneralLinearPlus: {
          const Matrix a = structure_from_coords(spec, coords);
          return b * expm(transpose(a)) * expm(a - transpose(a));
        }
        case ManifoldKind::Stiefel: {
          const auto [a, perp] = stiefel_parts_from_coords(spec, coords);
          const Matrix ambient = b * a + base.basis_completion() * perp;
          const auto parts = stiefel_geodesic_parts(base, a, ambient);
          const Matrix ex = expm(parts.block);
          const int k = spec.k;
          Matrix firstcols(2 * k, k);
          for (int i = 0; i < 2 * k; ++i) {
            for (int j = 0; j < k; ++j) firstcols(i, j) = ex(i, j);
          }
          return parts.left * firstcols;
        }
        case ManifoldKind::Sphere: {
          const Matrix v = coords_to_ambient(base, coords);
          const double norm = fro_norm(v);
          if (norm == 0.0) return b;
          return std::cos(norm) * b + sinc(norm) * v;
        }
        case ManifoldKind::Hyperbolic: {
          const Matrix v = coords_to_ambient(base, coords);
          const double norm =
              std::sqrt(std::max(0.0, hyperbolic_inner(v, v)));
          if (norm == 0.0) return b;
          return std::cosh(norm) * b + sinhc(norm) * v;
        }
        case ManifoldKind::SymPosDef:
          return base.sqrt_factor() *
                 expm(structure_from_coords(spec, coords)) *
                 base.sqrt_factor();
      }
      break;

    case TrivKind::Cayley:
      return b * cayley_transform(0.5 * structure_from_coords(spec, coords));

    case TrivKind::Projector:
      if (spec.kind == ManifoldKind::Sphere) {
        const Matrix u = b + coords_to_ambient(base, coords);
        const double norm = fro_norm(u);
        if (norm == 0.0) {
          throw StructureError("sphere projector: zero vector");
        }
        return (1.0 / norm) * u;
      }
      return project_to_special_orthogonal(b +
                                           coords_to_ambient(base, coords));

    case TrivKind::Squaring: {
      const Matrix ambient = coords_to_ambient(base, coords);
      const Matrix root = base.sqrt_factor() + sqrt_sylvester(base, ambient);
      return root * root;
    }

    case TrivKind::Cholesky: {
      const Matrix ambient = coords_to_ambient(base, coords);
      Matrix l = base.chol_factor() + chol_perturbation(base, ambient);
      for (int i = 0; i < l.rows(); ++i) {
        for (int j = i + 1; j < l.cols(); ++j) l(i, j) = 0.0;
        if (l(i, i) <= 1e-12) {
          throw StructureError(
              "cholesky retraction: factor diagonal left the cone");
        }
      }
      return l * transpose(l);
    }
  }
  throw StructureError("value: unsupported trivialization");
}

}  // namespace

std::string to_string(TrivKind kind) {
  switch (kind) {
    case TrivKind::LieExp:
      return "lie_exp";
    case TrivKind::RiemannianExp:
      return "riemannian_exp";
    case TrivKind::Cayley:
      return "cayley";
    case TrivKind::Projector:
      return "projector";
    case TrivKind::Squaring:
      return "squaring";
    case TrivKind::Cholesky:
      return "cholesky";
  }
  return "?";
}

bool is_supported(TrivKind kind, ManifoldKind manifold) {
  switch (kind) {
    case TrivKind::LieExp:
      return is_group(manifold);
    case TrivKind::RiemannianExp:
      return true;
    case TrivKind::Cayley:
      return manifold == ManifoldKind::SpecialOrthogonal;
    case TrivKind::Projector:
      return manifold == ManifoldKind::SpecialOrthogonal ||
             manifold == ManifoldKind::Sphere;
    case TrivKind::Squaring:
    case TrivKind::Cholesky:
      return manifold == ManifoldKind::SymPosDef;
  }
  return false;
}

Trivialization::Trivialization(TrivKind kind_, ManifoldSpec manifold_)
    : kind(kind_), manifold(std::move(manifold_)) {
  if (!is_supported(kind, manifold.kind)) {
    throw StructureError(to_string(kind) + " is not defined on " +
                         manifold.name());
  }
}

Matrix cayley_transform(const Matrix& skew) {
  if (skew.rows() != skew.cols()) {
    throw ShapeError("cayley_transform: square input required");
  }
  const Matrix eye = Matrix::identity(skew.rows());
  return lu_solve(eye - skew, eye + skew);
}

Matrix project_to_special_orthogonal(const Matrix& x) {
  if (x.rows() != x.cols()) {
    throw ShapeError("project_to_special_orthogonal: square input required");
  }
  const SvdFactors f = svd(x);
  const double scale = f.sigma.empty() ? 0.0 : f.sigma.front();
  if (f.sigma.back() <= 1e-14 * (1.0 + scale)) {
    throw SingularMatrixError(
        "project_to_special_orthogonal: singular input");
  }
  Matrix u = f.u;
  Matrix result = u * transpose(f.v);
  if (determinant(result) < 0.0) {
    const int last = u.cols() - 1;
    for (int i = 0; i < u.rows(); ++i) u(i, last) = -u(i, last);
    result = u * transpose(f.v);
  }
  return result;
}

Point value(const Trivialization& t, const Point& base,
            const TangentCoords& y) {
  if (!(base.manifold() == t.manifold)) {
    throw ShapeError("value: base manifold does not match trivialization");
  }
  return Point::make(t.manifold, value_matrix(t, base, y.coords));
}

PullbackGradient pullback_grad(const Trivialization& t, const Point& base,
                               const TangentCoords& y,
                               const Matrix& ambient_grad) {
  const ManifoldSpec& spec = t.manifold;
  const Matrix& b = base.value();
  const Matrix& g = ambient_grad;
  if (g.rows() != spec.ambient_rows() || g.cols() != spec.ambient_cols()) {
    throw ShapeError("pullback_grad: ambient gradient shape mismatch");
  }

  switch (t.kind) {
    case TrivKind::LieExp: {
      const Matrix a = structure_from_coords(spec, y.coords);
      const Matrix d = dexpm(transpose(a), transpose(b) * g);
      return {coords_from_structure_gradient(spec, d)};
    }

    case TrivKind::RiemannianExp:
      switch (spec.kind) {
        case ManifoldKind::SpecialOrthogonal:
        case ManifoldKind::RealTorus: {
          const Matrix a = structure_from_coords(spec, y.coords);
          const Matrix d = dexpm(transpose(a), transpose(b) * g);
          return {coords_from_structure_gradient(spec, d)};
        }
        case ManifoldKind::SpecialLinear:
        case ManifoldKind::GeneralLinearPlus: {
          // product rule over B e^{A'} e^{A - A'}
          const Matrix a = structure_from_coords(spec, y.coords);
          const Matrix at = transpose(a);
          const Matrix q = expm(a - at);
          const Matrix p = expm(at);
          const Matrix btg = transpose(b) * g;
          const Matrix u1 = transpose(dexpm(a, btg * transpose(q)));
          const Matrix m = dexpm(at - a, transpose(p) * btg);
          const Matrix d = u1 + m - transpose(m);
          return {coords_from_structure_gradient(spec, d)};
        }
        case ManifoldKind::SymPosDef: {
          const Matrix a = structure_from_coords(spec, y.coords);
          const Matrix d =
              dexpm(a, base.sqrt_factor() * g * base.sqrt_factor());
          return {coords_from_structure_gradient(spec, d)};
        }
        case ManifoldKind::Sphere: {
          const Matrix v = coords_to_ambient(base, y.coords);
          const double tnorm = fro_norm(v);
          const double gx = fro_inner(g, b);
          const double gv = fro_inner(g, v);
          const double alpha =
              -sinc(tnorm) * gx + dsinc_over_t(tnorm) * gv;
          const Matrix grad_v = alpha * v + sinc(tnorm) * g;
          const Matrix c = transpose(base.tangent_basis()) * grad_v;
          return {{c.data().begin(), c.data().end()}};
        }
        case ManifoldKind::Hyperbolic: {
          const Matrix v = coords_to_ambient(base, y.coords);
          const double tnorm =
              std::sqrt(std::max(0.0, hyperbolic_inner(v, v)));
          const double gx = fro_inner(g, b);
          const double gv = fro_inner(g, v);
          const double beta =
              sinhc(tnorm) * gx + dsinhc_over_t(tnorm) * gv;
          // gradient w.r.t. v in Euclidean coordinates: beta J v + sinhc g
          const int m = v.rows();
          Matrix grad_v = sinhc(tnorm) * g;
          for (int i = 0; i < m; ++i) {
            const double ji = i == m - 1 ? -1.0 : 1.0;
            grad_v(i, 0) += beta * ji * v(i, 0);
          }
          const Matrix c = transpose(base.tangent_basis()) * grad_v;
          return {{c.data().begin(), c.data().end()}};
        }
        case ManifoldKind::Stiefel:
          return {pullback_fd(t, base, y, g)};
      }
      break;

    case TrivKind::Cayley: {
      const Matrix half = 0.5 * structure_from_coords(spec, y.coords);
      const Matrix eye = Matrix::identity(spec.n);
      const Matrix cay = cayley_transform(half);
      const Matrix w = transpose(lu_solve(eye - half, transpose(g) * b));
      const Matrix d = 0.5 * (transpose(eye + cay) * w);
      return {coords_from_structure_gradient(spec, d)};
    }

    case TrivKind::Projector:
      if (spec.kind == ManifoldKind::Sphere) {
        const Matrix u = b + coords_to_ambient(base, y.coords);
        const double norm = fro_norm(u);
        const double ug = fro_inner(u, g);
        const Matrix grad_v =
            (1.0 / norm) * g - (ug / (norm * norm * norm)) * u;
        const Matrix c = transpose(base.tangent_basis()) * grad_v;
        return {{c.data().begin(), c.data().end()}};
      }
      return {pullback_fd(t, base, y, g)};

    case TrivKind::Squaring: {
      const Matrix ambient = coords_to_ambient(base, y.coords);
      const Matrix root = base.sqrt_factor() + sqrt_sylvester(base, ambient);
      const Matrix d_root = root * g + g * root;
      const Matrix d_ambient = sqrt_sylvester(base, d_root);
      const Matrix d =
          base.sqrt_factor() * d_ambient * base.sqrt_factor();
      return {coords_from_structure_gradient(spec, d)};
    }

    case TrivKind::Cholesky: {
      const Matrix ambient = coords_to_ambient(base, y.coords);
      const Matrix& l0 = base.chol_factor();
      const Matrix factor = l0 + chol_perturbation(base, ambient);
      const Matrix d_factor = (g + transpose(g)) * factor;
      const Matrix masked = tril_half_diag(transpose(l0) * d_factor);
      const Matrix half = lu_solve(transpose(l0), masked);
      const Matrix d_ambient =
          transpose(lu_solve(transpose(l0), transpose(half)));
      const Matrix d =
          base.sqrt_factor() * d_ambient * base.sqrt_factor();
      return {coords_from_structure_gradient(spec, d)};
    }
  }
  throw StructureError("pullback_grad: unsupported trivialization");
}

double is_retraction_check(const Trivialization& t, const Point& base,
                           std::uint64_t seed) {
  const ManifoldSpec& spec = t.manifold;
  const int dim = spec.dim();
  const int ndir = std::min(dim, 12);
  SplitMix64 rng(derive_stream(seed, 0x72657472ULL));
  const double h = 1e-5;

  double worst = 0.0;
  for (int d = 0; d < ndir; ++d) {
    std::vector<double> dir(static_cast<std::size_t>(dim));
    double norm = 0.0;
    for (auto& x : dir) {
      x = rng.gaussian();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    std::vector<double> plus(dir.size()), minus(dir.size());
    for (std::size_t i = 0; i < dir.size(); ++i) {
      dir[i] /= norm;
      plus[i] = h * dir[i];
      minus[i] = -h * dir[i];
    }
    const Matrix fd =
        (0.5 / h) * (value_matrix(t, base, plus) -
                     value_matrix(t, base, minus));
    const Matrix expected = coords_to_ambient(base, dir);
    worst = std::max(worst, fro_norm(fd - expected));
  }
  return worst;
}

}  // namespace trivopt
