#include "trivopt/engine.hpp"

#include <chrono>
#include <cmath>

#include "trivopt/matexp.hpp"

namespace trivopt {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TrivEngineState make_engine(Trivialization triv, Point start,
                            OptimizerState optimizer,
                            std::uint64_t rebase_period, EngineConfig config) {
  if (rebase_period < 1) {
    throw StructureError("engine: rebase period K must be >= 1");
  }
  if (!(start.manifold() == triv.manifold)) {
    throw ShapeError("engine: start point manifold mismatch");
  }
  TrivEngineState s{std::move(triv),
                    std::move(start),
                    TangentCoords{},
                    0,
                    rebase_period,
                    std::move(optimizer),
                    config,
                    {},
                    0,
                    0,
                    TraceRecord{}};
  s.y = TangentCoords::zero(s.trivialization.manifold);
  return s;
}

TrivEngineState engine_step(TrivEngineState s, const Objective& obj) {
  const auto t0 = std::chrono::steady_clock::now();

  const Point x = value(s.trivialization, s.basis, s.y);
  const double loss = obj.eval(x);
  const double violation = membership(s.trivialization.manifold, x.value());
  if (!std::isfinite(loss)) {
    throw NumericalAbort("engine: non-finite loss at step " +
                             std::to_string(s.step_index),
                         std::move(s.history));
  }

  const Matrix ambient_grad = obj.euclidean_grad(x);
  const PullbackGradient g =
      pullback_grad(s.trivialization, s.basis, s.y, ambient_grad);

  auto stepped = step(s.optimizer, s.y.coords, g.coords_grad);
  s.optimizer = std::move(stepped.state);
  s.y.coords = std::move(stepped.y);
  s.k_since_rebase += 1;
  s.step_index += 1;

  TraceRecord rec;
  rec.step = s.step_index;
  rec.loss = loss;
  rec.grad_norm = norm2(g.coords_grad);
  rec.membership_violation = violation;

  if (s.config.injectivity_diagnostic) {
    const ManifoldKind mk = s.trivialization.manifold.kind;
    if (s.trivialization.kind == TrivKind::LieExp &&
        (mk == ManifoldKind::SpecialOrthogonal ||
         mk == ManifoldKind::RealTorus)) {
      const Matrix alg =
          structure_from_coords(s.trivialization.manifold, s.y.coords);
      if (!lie_injectivity_check(alg)) s.injectivity_violations += 1;
    }
  }

  if (s.k_since_rebase >= s.rebase_period) {
    const Point pre = value(s.trivialization, s.basis, s.y);
    s.basis = pre;
    s.y = TangentCoords::zero(s.trivialization.manifold);
    s.k_since_rebase = 0;
    if (!s.config.carry_moments) s.optimizer = reset(s.optimizer);
    const Point post = value(s.trivialization, s.basis, s.y);
    rec.rebase = true;
    rec.rebase_point_drift = fro_norm(post.value() - pre.value());
    rec.loss_after_rebase = obj.eval(post);
  }

  if (!s.config.deterministic_timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  }
  s.last = rec;
  if (s.config.trace_every > 0 &&
      (s.step_index % s.config.trace_every == 0 || rec.rebase)) {
    s.history.push_back(rec);
  }
  return s;
}

TrivEngineState run(TrivEngineState s, const Objective& obj, long max_steps,
                    StopRule stop) {
  if (max_steps < 1) throw StructureError("run: max_steps must be >= 1");
  for (long i = 0; i < max_steps; ++i) {
    s = engine_step(std::move(s), obj);
    if (s.last.loss <= stop.loss_tol) break;
    if (s.last.grad_norm <= stop.grad_tol) break;
  }
  return s;
}

}  // namespace trivopt
