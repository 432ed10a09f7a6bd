#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "trivopt/optim.hpp"
#include "trivopt/triv.hpp"

namespace trivopt {

/// Objective over manifold points. Callers supply the ambient Euclidean
/// gradient; there is no autodiff.
struct Objective {
  std::function<double(const Point&)> eval;
  std::function<Matrix(const Point&)> euclidean_grad;
};

inline constexpr std::uint64_t kInfinitePeriod =
    std::numeric_limits<std::uint64_t>::max();

struct TraceRecord {
  long step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double membership_violation = 0.0;
  bool rebase = false;
  double wall_ms = 0.0;
  // rebase diagnostics; NaN on non-rebase steps
  double rebase_point_drift = std::numeric_limits<double>::quiet_NaN();
  double loss_after_rebase = std::numeric_limits<double>::quiet_NaN();
};

struct EngineConfig {
  bool carry_moments = false;   // keep optimizer buffers across a rebase
  long trace_every = 1;         // thinning for large runs
  bool deterministic_timing = false;  // record wall_ms as 0 for bit-exact traces
  bool injectivity_diagnostic = false;  // record (not act on) Thm-style
                                        // injectivity violations on skew
                                        // algebras
};

/// Raised when the loss turns non-finite; carries the trace gathered so far.
struct NumericalAbort : std::runtime_error {
  NumericalAbort(const std::string& what, std::vector<TraceRecord> trace)
      : std::runtime_error(what), partial_trace(std::move(trace)) {}
  std::vector<TraceRecord> partial_trace;
};

struct TrivEngineState {
  Trivialization trivialization;
  Point basis;      // current basepoint p_i
  TangentCoords y;  // current chart iterate
  std::uint64_t k_since_rebase = 0;
  std::uint64_t rebase_period = kInfinitePeriod;  // K
  OptimizerState optimizer;
  EngineConfig config;
  std::vector<TraceRecord> history;
  long step_index = 0;
  long injectivity_violations = 0;
  TraceRecord last;  // most recent record, independent of trace thinning
};

TrivEngineState make_engine(Trivialization triv, Point start,
                            OptimizerState optimizer,
                            std::uint64_t rebase_period,
                            EngineConfig config = {});

/// One optimizer step on the current chart; rebases every rebase_period
/// steps, resetting coordinates to zero.
TrivEngineState engine_step(TrivEngineState s, const Objective& obj);

struct StopRule {
  double grad_tol = 0.0;
  double loss_tol = -std::numeric_limits<double>::infinity();
};

/// Runs engine_step until max_steps or a stop tolerance fires. The trace is
/// in the returned state's history.
TrivEngineState run(TrivEngineState s, const Objective& obj, long max_steps,
                    StopRule stop = {});

}  // namespace trivopt
