#include "trivopt/manifolds.hpp"

#include <algorithm>
#include <cmath>

#include "trivopt/matexp.hpp"
#include "trivopt/rng.hpp"

namespace trivopt {

namespace {

constexpr double kMembershipTol = 1e-8;
constexpr double kTangencyTol = 1e-8;

void check_positive(int v, const char* what) {
  if (v <= 0) throw ShapeError(std::string(what) + " must be positive");
}

double hyperbolic_inner(const Matrix& x, const Matrix& y) {
  const int m = x.rows();
  double s = 0.0;
  for (int i = 0; i < m - 1; ++i) s += x(i, 0) * y(i, 0);
  return s - x(m - 1, 0) * y(m - 1, 0);
}

// Deterministic orthonormal basis of the tangent hyperplane at x: project the
// canonical basis, drop the smallest projection, Gram-Schmidt the rest.
// `lorentz` switches between the Euclidean and the hyperbolic bilinear form.
Matrix hyperplane_basis(const Matrix& x, bool lorentz) {
  const int m = x.rows();
  auto inner = [&](const Matrix& a, const Matrix& b) {
    return lorentz ? hyperbolic_inner(a, b) : fro_inner(a, b);
  };
  const double xx = inner(x, x);  // 1 on the sphere, -1 on the hyperboloid

  std::vector<Matrix> projected;
  projected.reserve(m);
  std::vector<double> norms(m);
  for (int i = 0; i < m; ++i) {
    Matrix e(m, 1);
    e(i, 0) = 1.0;
    const Matrix v = e - (inner(x, e) / xx) * x;
    norms[i] = inner(v, v);
    projected.push_back(v);
  }
  const int drop = static_cast<int>(
      std::min_element(norms.begin(), norms.end()) - norms.begin());

  Matrix basis(m, m - 1);
  int col = 0;
  for (int i = 0; i < m; ++i) {
    if (i == drop) continue;
    Matrix v = projected[i];
    for (int j = 0; j < col; ++j) {
      double dot = 0.0;
      for (int r = 0; r < m; ++r) {
        dot += (lorentz && r == m - 1 ? -1.0 : 1.0) * basis(r, j) * v(r, 0);
      }
      for (int r = 0; r < m; ++r) v(r, 0) -= dot * basis(r, j);
    }
    const double nn = inner(v, v);
    if (nn <= 1e-24) {
      throw StructureError("tangent basis construction degenerated");
    }
    const double inv = 1.0 / std::sqrt(nn);
    for (int r = 0; r < m; ++r) basis(r, col) = inv * v(r, 0);
    ++col;
  }
  return basis;
}

Matrix gaussian_matrix(int rows, int cols, SplitMix64& rng) {
  Matrix m(rows, cols);
  for (auto& x : m.data()) x = rng.gaussian();
  return m;
}

void check_coords_length(const ManifoldSpec& spec,
                         std::span<const double> coords) {
  if (static_cast<int>(coords.size()) != spec.dim()) {
    throw ShapeError("chart: expected " + std::to_string(spec.dim()) +
                     " coordinates, got " + std::to_string(coords.size()));
  }
}

}  // namespace

ManifoldSpec ManifoldSpec::special_orthogonal(int n) {
  check_positive(n, "SO size");
  return {ManifoldKind::SpecialOrthogonal, n, 0};
}
ManifoldSpec ManifoldSpec::real_torus(int blocks) {
  check_positive(blocks, "torus block count");
  return {ManifoldKind::RealTorus, blocks, 0};
}
ManifoldSpec ManifoldSpec::stiefel(int n, int k) {
  check_positive(n, "Stiefel rows");
  check_positive(k, "Stiefel cols");
  if (k > n) throw ShapeError("Stiefel requires k <= n");
  return {ManifoldKind::Stiefel, n, k};
}
ManifoldSpec ManifoldSpec::sphere(int n) {
  check_positive(n, "sphere dimension");
  return {ManifoldKind::Sphere, n, 0};
}
ManifoldSpec ManifoldSpec::hyperbolic(int n) {
  check_positive(n, "hyperbolic dimension");
  return {ManifoldKind::Hyperbolic, n, 0};
}
ManifoldSpec ManifoldSpec::sym_pos_def(int n) {
  check_positive(n, "SPD size");
  return {ManifoldKind::SymPosDef, n, 0};
}
ManifoldSpec ManifoldSpec::special_linear(int n) {
  if (n < 2) throw ShapeError("SL size must be at least 2");
  return {ManifoldKind::SpecialLinear, n, 0};
}
ManifoldSpec ManifoldSpec::general_linear_plus(int n) {
  check_positive(n, "GL+ size");
  return {ManifoldKind::GeneralLinearPlus, n, 0};
}

int ManifoldSpec::ambient_rows() const {
  switch (kind) {
    case ManifoldKind::RealTorus:
      return 2 * n;
    case ManifoldKind::Sphere:
    case ManifoldKind::Hyperbolic:
      return n + 1;
    default:
      return n;
  }
}

int ManifoldSpec::ambient_cols() const {
  switch (kind) {
    case ManifoldKind::Stiefel:
      return k;
    case ManifoldKind::Sphere:
    case ManifoldKind::Hyperbolic:
      return 1;
    case ManifoldKind::RealTorus:
      return 2 * n;
    default:
      return n;
  }
}

int ManifoldSpec::dim() const {
  switch (kind) {
    case ManifoldKind::SpecialOrthogonal:
      return n * (n - 1) / 2;
    case ManifoldKind::RealTorus:
      return n;
    case ManifoldKind::Stiefel:
      return n * k - k * (k + 1) / 2;
    case ManifoldKind::Sphere:
    case ManifoldKind::Hyperbolic:
      return n;
    case ManifoldKind::SymPosDef:
      return n * (n + 1) / 2;
    case ManifoldKind::SpecialLinear:
      return n * n - 1;
    case ManifoldKind::GeneralLinearPlus:
      return n * n;
  }
  return 0;
}

std::string ManifoldSpec::name() const {
  switch (kind) {
    case ManifoldKind::SpecialOrthogonal:
      return "SO(" + std::to_string(n) + ")";
    case ManifoldKind::RealTorus:
      return "T(" + std::to_string(2 * n) + ")";
    case ManifoldKind::Stiefel:
      return "St(" + std::to_string(n) + "," + std::to_string(k) + ")";
    case ManifoldKind::Sphere:
      return "S^" + std::to_string(n);
    case ManifoldKind::Hyperbolic:
      return "H^" + std::to_string(n);
    case ManifoldKind::SymPosDef:
      return "SPD(" + std::to_string(n) + ")";
    case ManifoldKind::SpecialLinear:
      return "SL(" + std::to_string(n) + ")";
    case ManifoldKind::GeneralLinearPlus:
      return "GL+(" + std::to_string(n) + ")";
  }
  return "?";
}

double membership(const ManifoldSpec& spec, const Matrix& x) {
  if (x.rows() != spec.ambient_rows() || x.cols() != spec.ambient_cols()) {
    throw ShapeError("membership: ambient shape mismatch for " + spec.name());
  }
  switch (spec.kind) {
    case ManifoldKind::SpecialOrthogonal: {
      const double ortho =
          fro_norm(transpose(x) * x - Matrix::identity(spec.n));
      return ortho + std::max(0.0, -determinant(x));
    }
    case ManifoldKind::RealTorus: {
      double off = 0.0;
      double resid = 0.0;
      const int m = 2 * spec.n;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (i / 2 != j / 2) off += x(i, j) * x(i, j);
        }
      }
      for (int b = 0; b < spec.n; ++b) {
        const double a = x(2 * b, 2 * b);
        const double c = x(2 * b + 1, 2 * b);
        const double bb = x(2 * b, 2 * b + 1);
        const double d = x(2 * b + 1, 2 * b + 1);
        // rotation block: [[a, -c], [c, a]] with a^2 + c^2 = 1
        resid += std::abs(d - a) + std::abs(bb + c) +
                 std::abs(a * a + c * c - 1.0);
      }
      return std::sqrt(off) + resid;
    }
    case ManifoldKind::Stiefel:
      return fro_norm(transpose(x) * x - Matrix::identity(spec.k));
    case ManifoldKind::Sphere:
      return std::abs(fro_norm(x) - 1.0);
    case ManifoldKind::Hyperbolic: {
      const double quad = hyperbolic_inner(x, x);
      return std::abs(quad + 1.0) + std::max(0.0, -x(x.rows() - 1, 0));
    }
    case ManifoldKind::SymPosDef: {
      const double asym = fro_norm(x - transpose(x));
      const Matrix sym = 0.5 * (x + transpose(x));
      const SymEig eig = sym_eig(sym);
      return asym + std::max(0.0, -eig.values.front());
    }
    case ManifoldKind::SpecialLinear:
      return std::abs(determinant(x) - 1.0);
    case ManifoldKind::GeneralLinearPlus:
      return std::max(0.0, -determinant(x));
  }
  return 0.0;
}

Point Point::make(const ManifoldSpec& spec, Matrix value) {
  if (!value.all_finite()) {
    throw MembershipError("point has non-finite entries");
  }
  const double violation = membership(spec, value);
  if (violation > kMembershipTol) {
    throw MembershipError("point violates " + spec.name() +
                          " membership by " + std::to_string(violation));
  }
  Point p;
  p.spec_ = spec;
  p.value_ = std::move(value);
  switch (spec.kind) {
    case ManifoldKind::Stiefel:
      p.basis_completion_ = orthonormal_completion(p.value_);
      break;
    case ManifoldKind::SymPosDef: {
      p.eig_ = sym_eig(0.5 * (p.value_ + transpose(p.value_)));
      if (p.eig_.values.front() <= 1e-12) {
        throw MembershipError("SPD point left the cone: smallest eigenvalue " +
                              std::to_string(p.eig_.values.front()));
      }
      const int n = spec.n;
      Matrix droot(n, n), dinv(n, n);
      for (int i = 0; i < n; ++i) {
        droot(i, i) = std::sqrt(p.eig_.values[i]);
        dinv(i, i) = 1.0 / droot(i, i);
      }
      p.sqrt_ = p.eig_.vectors * droot * transpose(p.eig_.vectors);
      p.inv_sqrt_ = p.eig_.vectors * dinv * transpose(p.eig_.vectors);
      p.chol_ = cholesky(0.5 * (p.value_ + transpose(p.value_)));
      break;
    }
    case ManifoldKind::Sphere:
      p.tangent_basis_ = hyperplane_basis(p.value_, /*lorentz=*/false);
      break;
    case ManifoldKind::Hyperbolic:
      p.tangent_basis_ = hyperplane_basis(p.value_, /*lorentz=*/true);
      break;
    default:
      break;
  }
  return p;
}

Point Point::make_unchecked(const ManifoldSpec& spec, Matrix value) {
  Point p;
  p.spec_ = spec;
  p.value_ = std::move(value);
  return p;
}

Matrix structure_from_coords(const ManifoldSpec& spec,
                             std::span<const double> coords) {
  check_coords_length(spec, coords);
  switch (spec.kind) {
    case ManifoldKind::SpecialOrthogonal: {
      const int n = spec.n;
      Matrix a(n, n);
      std::size_t idx = 0;
      for (int i = 1; i < n; ++i) {
        for (int j = 0; j < i; ++j, ++idx) {
          a(i, j) = coords[idx];
          a(j, i) = -coords[idx];
        }
      }
      return a;
    }
    case ManifoldKind::RealTorus: {
      const int m = 2 * spec.n;
      Matrix a(m, m);
      for (int b = 0; b < spec.n; ++b) {
        a(2 * b + 1, 2 * b) = coords[b];
        a(2 * b, 2 * b + 1) = -coords[b];
      }
      return a;
    }
    case ManifoldKind::SymPosDef: {
      const int n = spec.n;
      Matrix a(n, n);
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j, ++idx) {
          a(i, j) = coords[idx];
          a(j, i) = coords[idx];
        }
      }
      return a;
    }
    case ManifoldKind::SpecialLinear: {
      const int n = spec.n;
      Matrix m(n, n);
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == n - 1 && j == n - 1) continue;
          m(i, j) = coords[idx++];
        }
      }
      const double shift = trace(m) / n;
      for (int i = 0; i < n; ++i) m(i, i) -= shift;
      return m;
    }
    case ManifoldKind::GeneralLinearPlus: {
      const int n = spec.n;
      Matrix a(n, n);
      std::copy(coords.begin(), coords.end(), a.data().begin());
      return a;
    }
    default:
      throw StructureError("structure_from_coords: unsupported for " +
                           spec.name());
  }
}

std::vector<double> coords_from_structure_gradient(const ManifoldSpec& spec,
                                                   const Matrix& grad) {
  std::vector<double> out(static_cast<std::size_t>(spec.dim()));
  switch (spec.kind) {
    case ManifoldKind::SpecialOrthogonal: {
      std::size_t idx = 0;
      for (int i = 1; i < spec.n; ++i) {
        for (int j = 0; j < i; ++j, ++idx) out[idx] = grad(i, j) - grad(j, i);
      }
      return out;
    }
    case ManifoldKind::RealTorus: {
      for (int b = 0; b < spec.n; ++b) {
        out[b] = grad(2 * b + 1, 2 * b) - grad(2 * b, 2 * b + 1);
      }
      return out;
    }
    case ManifoldKind::SymPosDef: {
      std::size_t idx = 0;
      for (int i = 0; i < spec.n; ++i) {
        for (int j = i; j < spec.n; ++j, ++idx) {
          out[idx] = i == j ? grad(i, i) : grad(i, j) + grad(j, i);
        }
      }
      return out;
    }
    case ManifoldKind::SpecialLinear: {
      const int n = spec.n;
      const double shift = trace(grad) / n;
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == n - 1 && j == n - 1) continue;
          out[idx++] = grad(i, j) - (i == j ? shift : 0.0);
        }
      }
      return out;
    }
    case ManifoldKind::GeneralLinearPlus: {
      std::copy(grad.data().begin(), grad.data().end(), out.begin());
      return out;
    }
    default:
      throw StructureError("coords_from_structure_gradient: unsupported for " +
                           spec.name());
  }
}

std::pair<Matrix, Matrix> stiefel_parts_from_coords(
    const ManifoldSpec& spec, std::span<const double> coords) {
  check_coords_length(spec, coords);
  const int n = spec.n;
  const int k = spec.k;
  Matrix a(k, k);
  std::size_t idx = 0;
  for (int i = 1; i < k; ++i) {
    for (int j = 0; j < i; ++j, ++idx) {
      a(i, j) = coords[idx];
      a(j, i) = -coords[idx];
    }
  }
  Matrix perp(n - k, k);
  for (auto& x : perp.data()) x = coords[idx++];
  return {std::move(a), std::move(perp)};
}

Matrix coords_to_ambient(const Point& base, std::span<const double> coords) {
  const ManifoldSpec& spec = base.manifold();
  check_coords_length(spec, coords);
  switch (spec.kind) {
    case ManifoldKind::SpecialOrthogonal:
    case ManifoldKind::RealTorus:
    case ManifoldKind::SpecialLinear:
    case ManifoldKind::GeneralLinearPlus:
      return base.value() * structure_from_coords(spec, coords);
    case ManifoldKind::SymPosDef:
      return base.sqrt_factor() * structure_from_coords(spec, coords) *
             base.sqrt_factor();
    case ManifoldKind::Stiefel: {
      const auto [a, perp] = stiefel_parts_from_coords(spec, coords);
      return base.value() * a + base.basis_completion() * perp;
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::Hyperbolic: {
      Matrix c(spec.dim(), 1);
      std::copy(coords.begin(), coords.end(), c.data().begin());
      return base.tangent_basis() * c;
    }
  }
  throw StructureError("coords_to_ambient: unknown manifold");
}

Matrix coords_to_ambient(const Point& base, const TangentCoords& t) {
  if (!(t.manifold == base.manifold())) {
    throw ShapeError("coords_to_ambient: coordinates belong to " +
                     t.manifold.name() + ", base lives on " +
                     base.manifold().name());
  }
  return coords_to_ambient(base, std::span<const double>(t.coords));
}

std::vector<double> chart_adjoint(const Point& base,
                                  const Matrix& ambient_grad) {
  const ManifoldSpec& spec = base.manifold();
  if (ambient_grad.rows() != spec.ambient_rows() ||
      ambient_grad.cols() != spec.ambient_cols()) {
    throw ShapeError("chart_adjoint: ambient shape mismatch");
  }
  switch (spec.kind) {
    case ManifoldKind::SpecialOrthogonal:
    case ManifoldKind::RealTorus:
    case ManifoldKind::SpecialLinear:
    case ManifoldKind::GeneralLinearPlus:
      return coords_from_structure_gradient(
          spec, transpose(base.value()) * ambient_grad);
    case ManifoldKind::SymPosDef:
      return coords_from_structure_gradient(
          spec, base.sqrt_factor() * ambient_grad * base.sqrt_factor());
    case ManifoldKind::Stiefel: {
      const Matrix a = transpose(base.value()) * ambient_grad;
      const Matrix perp =
          transpose(base.basis_completion()) * ambient_grad;
      std::vector<double> out(static_cast<std::size_t>(spec.dim()));
      std::size_t idx = 0;
      for (int i = 1; i < spec.k; ++i) {
        for (int j = 0; j < i; ++j, ++idx) out[idx] = a(i, j) - a(j, i);
      }
      for (double x : perp.data()) out[idx++] = x;
      return out;
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::Hyperbolic: {
      const Matrix c = transpose(base.tangent_basis()) * ambient_grad;
      return {c.data().begin(), c.data().end()};
    }
  }
  throw StructureError("chart_adjoint: unknown manifold");
}

TangentCoords ambient_to_coords(const Point& base,
                                const Matrix& ambient_tangent) {
  const ManifoldSpec& spec = base.manifold();
  if (ambient_tangent.rows() != spec.ambient_rows() ||
      ambient_tangent.cols() != spec.ambient_cols()) {
    throw ShapeError("ambient_to_coords: ambient shape mismatch");
  }
  const double scale = 1.0 + fro_norm(ambient_tangent);
  TangentCoords out = TangentCoords::zero(spec);

  auto require_tangent = [&](double resid) {
    if (resid > kTangencyTol * scale) {
      throw TangencyError("ambient vector is not tangent to " + spec.name() +
                          " (residual " + std::to_string(resid) + ")");
    }
  };

  switch (spec.kind) {
    case ManifoldKind::SpecialOrthogonal:
    case ManifoldKind::RealTorus: {
      const Matrix a = transpose(base.value()) * ambient_tangent;
      require_tangent(fro_norm(a + transpose(a)));
      if (spec.kind == ManifoldKind::SpecialOrthogonal) {
        std::size_t idx = 0;
        for (int i = 1; i < spec.n; ++i) {
          for (int j = 0; j < i; ++j, ++idx) {
            out.coords[idx] = 0.5 * (a(i, j) - a(j, i));
          }
        }
      } else {
        double off = 0.0;
        for (int i = 0; i < a.rows(); ++i) {
          for (int j = 0; j < a.cols(); ++j) {
            if (i / 2 != j / 2) off += a(i, j) * a(i, j);
          }
        }
        require_tangent(std::sqrt(off));
        for (int b = 0; b < spec.n; ++b) {
          out.coords[b] = 0.5 * (a(2 * b + 1, 2 * b) - a(2 * b, 2 * b + 1));
        }
      }
      return out;
    }
    case ManifoldKind::Stiefel: {
      const Matrix a = transpose(base.value()) * ambient_tangent;
      require_tangent(fro_norm(a + transpose(a)));
      const Matrix perp = transpose(base.basis_completion()) * ambient_tangent;
      std::size_t idx = 0;
      for (int i = 1; i < spec.k; ++i) {
        for (int j = 0; j < i; ++j, ++idx) {
          out.coords[idx] = 0.5 * (a(i, j) - a(j, i));
        }
      }
      for (double x : perp.data()) out.coords[idx++] = x;
      const Matrix rebuilt = coords_to_ambient(base, out.coords);
      require_tangent(fro_norm(rebuilt - ambient_tangent));
      return out;
    }
    case ManifoldKind::Sphere: {
      require_tangent(std::abs(fro_inner(base.value(), ambient_tangent)));
      const Matrix c = transpose(base.tangent_basis()) * ambient_tangent;
      std::copy(c.data().begin(), c.data().end(), out.coords.begin());
      return out;
    }
    case ManifoldKind::Hyperbolic: {
      require_tangent(std::abs(hyperbolic_inner(base.value(),
                                                ambient_tangent)));
      for (int j = 0; j < spec.dim(); ++j) {
        Matrix col(spec.ambient_rows(), 1);
        for (int r = 0; r < spec.ambient_rows(); ++r) {
          col(r, 0) = base.tangent_basis()(r, j);
        }
        out.coords[j] = hyperbolic_inner(col, ambient_tangent);
      }
      return out;
    }
    case ManifoldKind::SymPosDef: {
      const Matrix a =
          base.inv_sqrt_factor() * ambient_tangent * base.inv_sqrt_factor();
      require_tangent(fro_norm(a - transpose(a)));
      std::size_t idx = 0;
      for (int i = 0; i < spec.n; ++i) {
        for (int j = i; j < spec.n; ++j, ++idx) {
          out.coords[idx] = 0.5 * (a(i, j) + a(j, i));
        }
      }
      return out;
    }
    case ManifoldKind::SpecialLinear: {
      const Matrix a = lu_solve(base.value(), ambient_tangent);
      require_tangent(std::abs(trace(a)));
      const int n = spec.n;
      const double shift = -a(n - 1, n - 1);
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == n - 1 && j == n - 1) continue;
          out.coords[idx++] = a(i, j) + (i == j ? shift : 0.0);
        }
      }
      return out;
    }
    case ManifoldKind::GeneralLinearPlus: {
      const Matrix a = lu_solve(base.value(), ambient_tangent);
      std::copy(a.data().begin(), a.data().end(), out.coords.begin());
      return out;
    }
  }
  throw StructureError("ambient_to_coords: unknown manifold");
}

Point random_point(const ManifoldSpec& spec, std::uint64_t seed) {
  SplitMix64 rng(derive_stream(seed, 0x706f696e74ULL));
  switch (spec.kind) {
    case ManifoldKind::SpecialOrthogonal: {
      Matrix q = qr_thin(gaussian_matrix(spec.n, spec.n, rng)).q;
      if (determinant(q) < 0.0) {
        for (int i = 0; i < spec.n; ++i) q(i, spec.n - 1) = -q(i, spec.n - 1);
      }
      return Point::make(spec, std::move(q));
    }
    case ManifoldKind::RealTorus: {
      Matrix x(2 * spec.n, 2 * spec.n);
      for (int b = 0; b < spec.n; ++b) {
        const double theta =
            (2.0 * rng.uniform() - 1.0) * 3.14159265358979323846;
        x(2 * b, 2 * b) = std::cos(theta);
        x(2 * b, 2 * b + 1) = -std::sin(theta);
        x(2 * b + 1, 2 * b) = std::sin(theta);
        x(2 * b + 1, 2 * b + 1) = std::cos(theta);
      }
      return Point::make(spec, std::move(x));
    }
    case ManifoldKind::Stiefel:
      return Point::make(spec, qr_thin(gaussian_matrix(spec.n, spec.k, rng)).q);
    case ManifoldKind::Sphere: {
      Matrix v = gaussian_matrix(spec.n + 1, 1, rng);
      const double norm = fro_norm(v);
      return Point::make(spec, (1.0 / norm) * v);
    }
    case ManifoldKind::Hyperbolic: {
      // geodesic from (0, ..., 0, 1) along a random tangent direction
      const int m = spec.n + 1;
      Matrix v(m, 1);
      for (int i = 0; i < m - 1; ++i) {
        v(i, 0) = rng.gaussian() / std::sqrt(static_cast<double>(spec.n));
      }
      const double t = std::sqrt(std::max(0.0, hyperbolic_inner(v, v)));
      Matrix x(m, 1);
      x(m - 1, 0) = 1.0;
      if (t > 0.0) {
        const double scale = std::sinh(t) / t;
        x = std::cosh(t) * x + scale * v;
      }
      return Point::make(spec, std::move(x));
    }
    case ManifoldKind::SymPosDef: {
      const Matrix g = gaussian_matrix(spec.n, spec.n, rng);
      Matrix x = g * transpose(g) + 1e-3 * Matrix::identity(spec.n);
      x = 0.5 * (x + transpose(x));
      return Point::make(spec, std::move(x));
    }
    case ManifoldKind::SpecialLinear: {
      for (int attempt = 0; attempt < 64; ++attempt) {
        const Matrix g = gaussian_matrix(spec.n, spec.n, rng);
        const double det = determinant(g);
        if (det <= 1e-8) continue;
        return Point::make(spec,
                           std::pow(det, -1.0 / spec.n) * g);
      }
      throw StructureError("random_point: failed to sample SL point");
    }
    case ManifoldKind::GeneralLinearPlus: {
      for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix g = gaussian_matrix(spec.n, spec.n, rng);
        const double det = determinant(g);
        if (std::abs(det) <= 1e-8) continue;
        if (det < 0.0) {
          for (int i = 0; i < spec.n; ++i) g(i, 0) = -g(i, 0);
        }
        return Point::make(spec, std::move(g));
      }
      throw StructureError("random_point: failed to sample GL+ point");
    }
  }
  throw StructureError("random_point: unknown manifold");
}

}  // namespace trivopt
