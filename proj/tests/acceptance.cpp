// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line each. Exit code is the number of failures.
// argv[1] must be the path to the trivopt CLI binary (used by the
// reproducibility criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "trivopt/bench.hpp"
#include "trivopt/matexp.hpp"
#include "trivopt/rng.hpp"

using namespace trivopt;

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols);
  for (auto& x : m.data()) x = rng.gaussian();
  return m;
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. exponential-gradient correctness
Outcome criterion_exp_gradient() {
  double worst_fd = 0.0;
  double worst_adj = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n = 2 + static_cast<int>(s % 7);  // up to 8
    const Matrix a = random_matrix(n, n, 10 + s);
    const Matrix c = random_matrix(n, n, 500 + s);

    // f(X) = <C, X>  =>  ambient gradient C; compare with central FD
    const Matrix grad = expm_grad(a, c);
    const double h = 1e-6;
    double scale = 1.0;
    for (double x : grad.data()) scale = std::max(scale, std::abs(x));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Matrix ap = a, am = a;
        ap(i, j) += h;
        am(i, j) -= h;
        const double fd =
            (fro_inner(c, expm(ap)) - fro_inner(c, expm(am))) / (2.0 * h);
        worst_fd = std::max(worst_fd, std::abs(fd - grad(i, j)) / scale);
      }
    }

    const Matrix g = random_matrix(n, n, 600 + s);
    const Matrix e = random_matrix(n, n, 700 + s);
    const double lhs = fro_inner(expm_grad(a, g), e);
    const double rhs = fro_inner(g, dexpm(a, e));
    worst_adj = std::max(worst_adj,
                         std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  Outcome out;
  out.ok = worst_fd <= 1e-6 && worst_adj <= 1e-10;
  std::ostringstream ss;
  ss << "fd_err=" << worst_fd << " adjoint_err=" << worst_adj;
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// 2. retraction axioms on every supported pair
Outcome criterion_retraction_axioms() {
  const ManifoldSpec so = ManifoldSpec::special_orthogonal(4);
  const ManifoldSpec torus = ManifoldSpec::real_torus(3);
  const ManifoldSpec st = ManifoldSpec::stiefel(6, 2);
  const ManifoldSpec sph = ManifoldSpec::sphere(4);
  const ManifoldSpec hyp = ManifoldSpec::hyperbolic(3);
  const ManifoldSpec spd = ManifoldSpec::sym_pos_def(3);
  const ManifoldSpec sl = ManifoldSpec::special_linear(3);
  const ManifoldSpec gl = ManifoldSpec::general_linear_plus(3);
  const std::vector<std::pair<TrivKind, ManifoldSpec>> pairs = {
      {TrivKind::LieExp, so},         {TrivKind::LieExp, torus},
      {TrivKind::LieExp, sl},         {TrivKind::LieExp, gl},
      {TrivKind::RiemannianExp, so},  {TrivKind::RiemannianExp, torus},
      {TrivKind::RiemannianExp, st},  {TrivKind::RiemannianExp, sph},
      {TrivKind::RiemannianExp, hyp}, {TrivKind::RiemannianExp, spd},
      {TrivKind::RiemannianExp, sl},  {TrivKind::RiemannianExp, gl},
      {TrivKind::Cayley, so},         {TrivKind::Projector, so},
      {TrivKind::Projector, sph},     {TrivKind::Squaring, spd},
      {TrivKind::Cholesky, spd},
  };
  Outcome out;
  double worst_zero = 0.0;
  double worst_first = 0.0;
  for (const auto& [kind, spec] : pairs) {
    const Trivialization t(kind, spec);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Point base = random_point(spec, seed);
      const double zero_err =
          fro_norm(value(t, base, TangentCoords::zero(spec)).value() -
                   base.value());
      const double first_err = is_retraction_check(t, base, 7000 + seed);
      worst_zero = std::max(worst_zero, zero_err);
      worst_first = std::max(worst_first,
                             first_err / (1.0 + fro_norm(base.value())));
      if (zero_err > 1e-12 ||
          first_err > 1e-4 * (1.0 + fro_norm(base.value()))) {
        out.ok = false;
        out.detail = to_string(kind) + " on " + spec.name() + " failed";
      }
    }
  }
  if (out.ok) {
    std::ostringstream ss;
    ss << "zero_err=" << worst_zero << " first_order_err=" << worst_first;
    out.detail = ss.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// 3. K=1 + SGD equals standalone Riemannian gradient descent
Outcome criterion_limit_case() {
  Outcome out;
  const double lr = 1e-2;
  std::ostringstream ss;

  {  // sphere Rayleigh on S^9
    const ProblemSpec pspec{ProblemName::Rayleigh, 9, 0, 5};
    const BuiltProblem p = build_problem(pspec);
    const Point start = initial_point(pspec, p.manifold);
    TrivEngineState engine = make_engine(
        Trivialization(TrivKind::RiemannianExp, p.manifold), start,
        make_optimizer(OptKind::Sgd, lr), 1);
    Matrix x = start.value();
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      engine = engine_step(std::move(engine), p.objective);
      const Matrix g = p.objective.euclidean_grad(
          Point::make_unchecked(p.manifold, x));
      const Matrix delta = -lr * (g - fro_inner(x, g) * x);
      const double t = fro_norm(delta);
      x = std::cos(t) * x + (std::sin(t) / t) * delta;
      worst = std::max(worst, fro_norm(engine.basis.value() - x));
    }
    if (worst > 1e-12) {
      out.ok = false;
      out.detail = "sphere discrepancy " + std::to_string(worst);
      return out;
    }
    ss << "sphere_err=" << worst;
  }

  {  // SO(4) Procrustes
    const ProblemSpec pspec{ProblemName::Procrustes, 4, 0, 6};
    const BuiltProblem p = build_problem(pspec);
    const Point start = initial_point(pspec, p.manifold);
    TrivEngineState engine = make_engine(
        Trivialization(TrivKind::RiemannianExp, p.manifold), start,
        make_optimizer(OptKind::Sgd, lr), 1);
    Matrix x = start.value();
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      engine = engine_step(std::move(engine), p.objective);
      const Matrix g = p.objective.euclidean_grad(
          Point::make_unchecked(p.manifold, x));
      const Matrix m = transpose(x) * g - transpose(g) * x;
      x = x * expm(-lr * m);
      worst = std::max(worst, fro_norm(engine.basis.value() - x));
    }
    if (worst > 1e-12) {
      out.ok = false;
      out.detail = "SO(4) discrepancy " + std::to_string(worst);
      return out;
    }
    ss << " so4_err=" << worst;
  }
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// 4 & 5. benchmark feasibility and desk-scale optima
RunConfig base_config(ProblemName name, int n, int k, TrivKind triv,
                      OptKind opt, double lr, std::uint64_t kperiod,
                      long steps) {
  RunConfig c;
  c.problem = {name, n, k, 42};
  c.triv = triv;
  c.opt = opt;
  c.lr = lr;
  c.rebase_period = kperiod;
  c.max_steps = steps;
  c.repro_timing = true;
  return c;
}

Outcome criterion_feasibility() {
  // fixed 2000-step runs across all five problems
  const std::vector<RunConfig> configs = {
      base_config(ProblemName::Procrustes, 16, 0, TrivKind::LieExp,
                  OptKind::Adam, 1e-3, 100, 2000),
      base_config(ProblemName::Rayleigh, 49, 0, TrivKind::RiemannianExp,
                  OptKind::Adam, 1e-3, 100, 2000),
      base_config(ProblemName::Brockett, 20, 4, TrivKind::RiemannianExp,
                  OptKind::Adam, 1e-3, 100, 2000),
      base_config(ProblemName::SpdRecovery, 10, 0, TrivKind::RiemannianExp,
                  OptKind::Adam, 1e-3, 100, 2000),
      base_config(ProblemName::HyperbolicCentroid, 10, 0,
                  TrivKind::RiemannianExp, OptKind::Adam, 1e-3, 100, 2000),
  };
  Outcome out;
  double worst = 0.0;
  for (const RunConfig& c : configs) {
    const TrivEngineState s = execute_run(c);
    if (s.step_index != 2000) {
      out.ok = false;
      out.detail = to_string(c.problem.name) + " stopped early";
      return out;
    }
    for (const TraceRecord& r : s.history) {
      worst = std::max(worst, r.membership_violation);
    }
  }
  out.ok = worst <= 1e-8;
  std::ostringstream ss;
  ss << "max_membership=" << worst;
  out.detail = ss.str();
  return out;
}

Outcome criterion_desk_optima() {
  struct BenchCase {
    RunConfig config;
    double target;  // required loss level
  };
  // one configuration per problem from the allowed grid:
  // triv in {lie_exp, riemannian_exp, cayley}, adam/rmsprop,
  // lr in {1e-3, 1e-2}, K in {1, 100, inf}
  std::vector<BenchCase> cases;
  {
    RunConfig c = base_config(ProblemName::Procrustes, 16, 0,
                              TrivKind::LieExp, OptKind::Adam, 1e-2, 100,
                              20000);
    c.loss_tol = 1e-6;
    cases.push_back({c, 1e-6});
  }
  {
    RunConfig c = base_config(ProblemName::Rayleigh, 49, 0,
                              TrivKind::RiemannianExp, OptKind::Adam, 1e-2,
                              100, 50000);
    const BuiltProblem p = build_problem(c.problem);
    c.loss_tol = *p.known_optimum + 1e-6;
    cases.push_back({c, c.loss_tol});
  }
  {
    RunConfig c = base_config(ProblemName::Brockett, 20, 4,
                              TrivKind::RiemannianExp, OptKind::Adam, 1e-2,
                              100, 20000);
    const BuiltProblem p = build_problem(c.problem);
    c.loss_tol = *p.known_optimum + 1e-5;
    cases.push_back({c, c.loss_tol});
  }
  {
    RunConfig c = base_config(ProblemName::SpdRecovery, 10, 0,
                              TrivKind::RiemannianExp, OptKind::Adam, 1e-2,
                              kInfinitePeriod, 60000);
    c.loss_tol = 1e-8;
    cases.push_back({c, 1e-8});
  }
  Outcome out;
  std::ostringstream ss;
  for (const BenchCase& bc : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const TrivEngineState s = execute_run(bc.config);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    const bool reached = s.last.loss <= bc.target;
    if (!reached || secs >= 60.0) {
      out.ok = false;
      ss << to_string(bc.config.problem.name) << " loss=" << s.last.loss
         << " target=" << bc.target << " secs=" << secs << "; ";
    } else {
      ss << to_string(bc.config.problem.name) << "=" << s.last.loss << " ("
         << s.step_index << " steps, " << secs << " s); ";
    }
  }
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// 6. formula cross-checks
Outcome criterion_formula_crosschecks() {
  Outcome out;
  std::ostringstream ss;

  // Lie and Riemannian exponentials coincide on SO(n)
  const ManifoldSpec so = ManifoldSpec::special_orthogonal(5);
  const Trivialization lie(TrivKind::LieExp, so);
  const Trivialization geo(TrivKind::RiemannianExp, so);
  double worst_so = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Point base = random_point(so, s);
    TangentCoords y = TangentCoords::zero(so);
    SplitMix64 rng(900 + s);
    for (auto& c : y.coords) c = rng.gaussian();
    worst_so = std::max(worst_so, fro_norm(value(lie, base, y).value() -
                                           value(geo, base, y).value()));
  }
  if (worst_so > 1e-12) out.ok = false;
  ss << "so_agreement=" << worst_so;

  // split SL geodesic keeps det = 1
  const ManifoldSpec sl = ManifoldSpec::special_linear(4);
  const Trivialization slgeo(TrivKind::RiemannianExp, sl);
  double worst_det = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Point base = random_point(sl, 50 + s);
    TangentCoords y = TangentCoords::zero(sl);
    SplitMix64 rng(1000 + s);
    for (auto& c : y.coords) c = 0.5 * rng.gaussian();
    worst_det = std::max(
        worst_det,
        std::abs(determinant(value(slgeo, base, y).value()) - 1.0));
  }
  if (worst_det > 1e-9) out.ok = false;
  ss << " sl_det_err=" << worst_det;

  // quarter great circle: e1 -> e2 at |v| = pi/2
  const ManifoldSpec sph = ManifoldSpec::sphere(2);
  const Point e1 = Point::make(sph, Matrix::column({1.0, 0.0, 0.0}));
  const Matrix target = Matrix::column({0.0, 1.0, 0.0});
  const TangentCoords coords = ambient_to_coords(e1, (kPi / 2.0) * target);
  const Trivialization sgeo(TrivKind::RiemannianExp, sph);
  const double sphere_err =
      fro_norm(value(sgeo, e1, coords).value() - target);
  if (sphere_err > 1e-14) out.ok = false;
  ss << " sphere_err=" << sphere_err;

  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// 7. injectivity diagnostic
Outcome criterion_injectivity() {
  const double inside = kPi - 0.1;
  const double outside = kPi + 0.1;
  const bool in_ok = lie_injectivity_check(Matrix{{0, -inside}, {inside, 0}});
  const bool out_ok =
      !lie_injectivity_check(Matrix{{0, -outside}, {outside, 0}});
  Outcome out;
  out.ok = in_ok && out_ok;
  out.detail = std::string("pi-0.1 -> ") + (in_ok ? "inside" : "WRONG") +
               ", pi+0.1 -> " + (out_ok ? "outside" : "WRONG");
  return out;
}

// ---------------------------------------------------------------------------
// 8. bitwise reproducibility through the CLI
Outcome criterion_reproducibility(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.ok = false;
    out.detail = "CLI path not supplied";
    return out;
  }
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string csv_a = (tmp / "accept_a.csv").string();
  const std::string csv_b = (tmp / "accept_b.csv").string();
  const std::string args =
      " run --problem procrustes --n 8 --triv lie_exp --k 50 --opt adam"
      " --lr 1e-3 --steps 500 --seed 42 --repro-timing --out ";
  const std::string quiet = " > /dev/null 2>&1";
  if (std::system((cli + args + csv_a + quiet).c_str()) != 0 ||
      std::system((cli + args + csv_b + quiet).c_str()) != 0) {
    out.ok = false;
    out.detail = "CLI run failed";
    return out;
  }
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ssin;
    ssin << in.rdbuf();
    return ssin.str();
  };
  const std::string a = slurp(csv_a);
  const std::string b = slurp(csv_b);
  std::remove(csv_a.c_str());
  std::remove(csv_b.c_str());
  out.ok = !a.empty() && a == b;
  out.detail = out.ok ? "identical (" + std::to_string(a.size()) + " bytes)"
                      : "outputs differ";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Entry {
    const char* name;
    double budget_s;  // 0 = unbounded
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> entries = {
      {"1 exponential-gradient correctness", 10.0, criterion_exp_gradient},
      {"2 retraction axioms", 30.0, criterion_retraction_axioms},
      {"3 K=1 limit case equals Riemannian GD", 5.0, criterion_limit_case},
      {"4 benchmark feasibility", 0.0, criterion_feasibility},
      {"5 desk-scale optima", 0.0, criterion_desk_optima},
      {"6 formula cross-checks", 0.0, criterion_formula_crosschecks},
      {"7 injectivity diagnostic", 0.0, criterion_injectivity},
      {"8 bitwise reproducibility", 0.0,
       [&cli]() { return criterion_reproducibility(cli); }},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.fn();
    } catch (const std::exception& ex) {
      out.ok = false;
      out.detail = std::string("exception: ") + ex.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (e.budget_s > 0.0 && secs > e.budget_s) {
      out.ok = false;
      out.detail += " [over budget]";
    }
    std::printf("%s: %s  (%.2f s) %s\n", out.ok ? "PASS" : "FAIL", e.name,
                secs, out.detail.c_str());
    if (!out.ok) ++failures;
  }
  return failures;
}
