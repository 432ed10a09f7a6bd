#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trivopt/engine.hpp"

namespace trivopt {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ProblemName {
  Procrustes,          // SO(n):   1/2 |QA - B|_F^2, B = Q* A
  Rayleigh,            // S^n:     x' C x
  Brockett,            // St(n,k): tr(X' C X N), N = diag(k..1)
  SpdRecovery,         // SPD(n):  1/2 |X - T|_F^2
  HyperbolicCentroid,  // H^n:     sum of squared geodesic distances
};

std::string to_string(ProblemName name);
ProblemName problem_from_string(const std::string& name);

struct ProblemSpec {
  ProblemName name = ProblemName::Procrustes;
  int n = 0;
  int k = 0;  // Stiefel width (brockett only)
  std::uint64_t seed = 0;
};

struct BuiltProblem {
  ManifoldSpec manifold;
  Objective objective;
  std::optional<double> known_optimum;
};

/// Instantiates problem data deterministically from spec.seed.
BuiltProblem build_problem(const ProblemSpec& spec);

/// Deterministic starting point for a run (separate seed stream from the
/// problem data).
Point initial_point(const ProblemSpec& spec, const ManifoldSpec& manifold);

/// Analytic Brockett minimum for ascending eigenvalues and N = diag(k..1).
double brockett_optimum(const std::vector<double>& eigenvalues_ascending,
                        int k);

/// Max relative error between the objective's gradient and central finite
/// differences over ambient entries; h must lie in [1e-8, 1e-3].
double gradcheck(const Objective& obj, const Point& x, double h);

struct RunConfig {
  ProblemSpec problem;
  TrivKind triv = TrivKind::RiemannianExp;
  std::uint64_t rebase_period = 100;  // K; kInfinitePeriod for "inf"
  OptKind opt = OptKind::Adam;
  double lr = 1e-3;
  long max_steps = 2000;
  double grad_tol = 0.0;
  double loss_tol = -std::numeric_limits<double>::infinity();
  bool carry_moments = false;
  long trace_every = 1;
  bool repro_timing = false;  // zero the wall_ms column for bit-exact output
  std::string out;            // CSV path; empty writes no file
};

/// Executes a configured run; returns the final engine state.
TrivEngineState execute_run(const RunConfig& config);

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);
std::string summary_line(const RunConfig& config, const TrivEngineState& s);

/// Parses flags (and an optional JSON config file; flags override it), runs,
/// writes the CSV, prints a summary. Exit codes: 0 success, 2 config error,
/// 3 numerical abort, 4 I/O failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace trivopt
