#include "trivopt/bench.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "trivopt/rng.hpp"

namespace trivopt {

namespace {

// seed streams: 1, 2, ... = problem data; 0x696e6974 = initial point
constexpr std::uint64_t kInitStream = 0x696e6974ULL;

Matrix gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols);
  for (auto& x : m.data()) x = rng.gaussian();
  return m;
}

double hyperbolic_inner(const Matrix& x, const Matrix& y) {
  const int m = x.rows();
  double s = 0.0;
  for (int i = 0; i < m - 1; ++i) s += x(i, 0) * y(i, 0);
  return s - x(m - 1, 0) * y(m - 1, 0);
}

// arccosh(u) / sqrt(u^2 - 1), extended by continuity at u = 1.
double acosh_slope(double u) {
  if (u <= 1.0 + 1e-12) return 1.0;
  return std::acosh(u) / std::sqrt(u * u - 1.0);
}

}  // namespace

std::string to_string(ProblemName name) {
  switch (name) {
    case ProblemName::Procrustes:
      return "procrustes";
    case ProblemName::Rayleigh:
      return "rayleigh";
    case ProblemName::Brockett:
      return "brockett";
    case ProblemName::SpdRecovery:
      return "spd_recovery";
    case ProblemName::HyperbolicCentroid:
      return "hyperbolic_centroid";
  }
  return "?";
}

ProblemName problem_from_string(const std::string& name) {
  if (name == "procrustes") return ProblemName::Procrustes;
  if (name == "rayleigh") return ProblemName::Rayleigh;
  if (name == "brockett") return ProblemName::Brockett;
  if (name == "spd_recovery") return ProblemName::SpdRecovery;
  if (name == "hyperbolic_centroid") return ProblemName::HyperbolicCentroid;
  throw ConfigError("unknown problem: " + name);
}

double brockett_optimum(const std::vector<double>& eigenvalues_ascending,
                        int k) {
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    total += static_cast<double>(k - i) * eigenvalues_ascending[i];
  }
  return total;
}

BuiltProblem build_problem(const ProblemSpec& spec) {
  if (spec.n <= 0) throw ConfigError("problem size n must be positive");
  switch (spec.name) {
    case ProblemName::Procrustes: {
      const ManifoldSpec m = ManifoldSpec::special_orthogonal(spec.n);
      const Matrix qstar =
          random_point(m, derive_stream(spec.seed, 1)).value();
      const Matrix a =
          gaussian_matrix(spec.n, spec.n, derive_stream(spec.seed, 2));
      const Matrix b = qstar * a;
      Objective obj;
      obj.eval = [a, b](const Point& p) {
        const Matrix r = p.value() * a - b;
        const double nrm = fro_norm(r);
        return 0.5 * nrm * nrm;
      };
      obj.euclidean_grad = [a, b](const Point& p) {
        return (p.value() * a - b) * transpose(a);
      };
      return {m, std::move(obj), 0.0};
    }
    case ProblemName::Rayleigh: {
      const ManifoldSpec m = ManifoldSpec::sphere(spec.n);
      const Matrix g =
          gaussian_matrix(spec.n + 1, spec.n + 1, derive_stream(spec.seed, 2));
      const Matrix c = 0.5 * (g + transpose(g));
      Objective obj;
      obj.eval = [c](const Point& p) {
        return fro_inner(p.value(), c * p.value());
      };
      obj.euclidean_grad = [c](const Point& p) {
        return 2.0 * (c * p.value());
      };
      return {m, std::move(obj), sym_eig(c).values.front()};
    }
    case ProblemName::Brockett: {
      if (spec.k <= 0 || spec.k > spec.n) {
        throw ConfigError("brockett requires 0 < k <= n");
      }
      const ManifoldSpec m = ManifoldSpec::stiefel(spec.n, spec.k);
      const Matrix g =
          gaussian_matrix(spec.n, spec.n, derive_stream(spec.seed, 2));
      const Matrix c = 0.5 * (g + transpose(g));
      Matrix nmat(spec.k, spec.k);
      for (int i = 0; i < spec.k; ++i) nmat(i, i) = spec.k - i;
      Objective obj;
      obj.eval = [c, nmat](const Point& p) {
        return fro_inner(p.value(), c * p.value() * nmat);
      };
      obj.euclidean_grad = [c, nmat](const Point& p) {
        return 2.0 * (c * p.value() * nmat);
      };
      return {m, std::move(obj), brockett_optimum(sym_eig(c).values, spec.k)};
    }
    case ProblemName::SpdRecovery: {
      const ManifoldSpec m = ManifoldSpec::sym_pos_def(spec.n);
      // scale-normalized sample keeps the target moderately conditioned
      const Matrix g =
          gaussian_matrix(spec.n, spec.n, derive_stream(spec.seed, 1));
      Matrix target =
          (1.0 / spec.n) * (g * transpose(g)) + Matrix::identity(spec.n);
      target = 0.5 * (target + transpose(target));
      Objective obj;
      obj.eval = [target](const Point& p) {
        const double nrm = fro_norm(p.value() - target);
        return 0.5 * nrm * nrm;
      };
      obj.euclidean_grad = [target](const Point& p) {
        return p.value() - target;
      };
      return {m, std::move(obj), 0.0};
    }
    case ProblemName::HyperbolicCentroid: {
      const ManifoldSpec m = ManifoldSpec::hyperbolic(spec.n);
      std::vector<Matrix> anchors;
      for (int j = 0; j < 8; ++j) {
        anchors.push_back(
            random_point(m, derive_stream(spec.seed, 10 + j)).value());
      }
      Objective obj;
      obj.eval = [anchors](const Point& p) {
        double total = 0.0;
        for (const Matrix& z : anchors) {
          const double u = std::max(1.0, -hyperbolic_inner(p.value(), z));
          const double d = std::acosh(u);
          total += d * d;
        }
        return total;
      };
      obj.euclidean_grad = [anchors](const Point& p) {
        const int rows = p.value().rows();
        Matrix grad(rows, 1);
        for (const Matrix& z : anchors) {
          const double u = std::max(1.0, -hyperbolic_inner(p.value(), z));
          const double w = 2.0 * acosh_slope(u);
          for (int i = 0; i < rows; ++i) {
            const double ji = i == rows - 1 ? -1.0 : 1.0;
            grad(i, 0) -= w * ji * z(i, 0);
          }
        }
        return grad;
      };
      return {m, std::move(obj), std::nullopt};
    }
  }
  throw ConfigError("unknown problem");
}

Point initial_point(const ProblemSpec& spec, const ManifoldSpec& manifold) {
  return random_point(manifold, derive_stream(spec.seed, kInitStream));
}

double gradcheck(const Objective& obj, const Point& x, double h) {
  if (!(h >= 1e-8 && h <= 1e-3)) {
    throw ConfigError("gradcheck: h must lie in [1e-8, 1e-3]");
  }
  const Matrix g = obj.euclidean_grad(x);
  const double gmax = max_abs(g);
  Matrix probe = x.value();
  double worst = 0.0;
  for (int i = 0; i < probe.rows(); ++i) {
    for (int j = 0; j < probe.cols(); ++j) {
      const double saved = probe(i, j);
      probe(i, j) = saved + h;
      const double fp = obj.eval(Point::make_unchecked(x.manifold(), probe));
      probe(i, j) = saved - h;
      const double fm = obj.eval(Point::make_unchecked(x.manifold(), probe));
      probe(i, j) = saved;
      const double fd = (fp - fm) / (2.0 * h);
      const double denom =
          std::max({std::abs(g(i, j)), std::abs(fd), 1e-3 * gmax, 1e-12});
      worst = std::max(worst, std::abs(g(i, j) - fd) / denom);
    }
  }
  return worst;
}

TrivEngineState execute_run(const RunConfig& config) {
  const BuiltProblem problem = build_problem(config.problem);
  if (!is_supported(config.triv, problem.manifold.kind)) {
    throw ConfigError(to_string(config.triv) + " is not defined on " +
                      problem.manifold.name());
  }
  if (config.rebase_period < 1) throw ConfigError("K must be >= 1 or inf");
  if (config.max_steps < 1) throw ConfigError("steps must be >= 1");
  if (!(config.lr > 0.0)) throw ConfigError("lr must be positive");

  const Trivialization triv(config.triv, problem.manifold);
  const Point start = initial_point(config.problem, problem.manifold);
  OptimizerState opt = make_optimizer(config.opt, config.lr);
  EngineConfig ec;
  ec.carry_moments = config.carry_moments;
  ec.trace_every = config.trace_every;
  ec.deterministic_timing = config.repro_timing;
  TrivEngineState s = make_engine(triv, start, std::move(opt),
                                  config.rebase_period, ec);
  return run(std::move(s), problem.objective, config.max_steps,
             {config.grad_tol, config.loss_tol});
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string k_to_string(std::uint64_t k) {
  return k == kInfinitePeriod ? "inf" : std::to_string(k);
}

std::uint64_t k_from_string(const std::string& s) {
  if (s == "inf") return kInfinitePeriod;
  long long v = 0;
  try {
    v = std::stoll(s);
  } catch (const std::invalid_argument&) {
    throw ConfigError("K must be an integer or inf");
  } catch (const std::out_of_range&) {
    throw ConfigError("K out of range");
  }
  if (v < 1) throw ConfigError("K must be >= 1 or inf");
  return static_cast<std::uint64_t>(v);
}

OptKind opt_from_string(const std::string& s) {
  if (s == "sgd") return OptKind::Sgd;
  if (s == "momentum") return OptKind::MomentumSgd;
  if (s == "adagrad") return OptKind::Adagrad;
  if (s == "rmsprop") return OptKind::RmsProp;
  if (s == "adam") return OptKind::Adam;
  throw ConfigError("unknown optimizer: " + s);
}

TrivKind triv_from_string(const std::string& s) {
  if (s == "lie_exp") return TrivKind::LieExp;
  if (s == "riemannian_exp") return TrivKind::RiemannianExp;
  if (s == "cayley") return TrivKind::Cayley;
  if (s == "projector") return TrivKind::Projector;
  if (s == "squaring") return TrivKind::Squaring;
  if (s == "cholesky") return TrivKind::Cholesky;
  throw ConfigError("unknown trivialization: " + s);
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("problem")) {
    const auto& p = j.at("problem");
    if (p.contains("name")) {
      c.problem.name = problem_from_string(p.at("name").get<std::string>());
    }
    if (p.contains("n")) c.problem.n = p.at("n").get<int>();
    if (p.contains("k")) c.problem.k = p.at("k").get<int>();
    if (p.contains("seed")) {
      c.problem.seed = p.at("seed").get<std::uint64_t>();
    }
  }
  if (j.contains("trivialization")) {
    c.triv = triv_from_string(j.at("trivialization").get<std::string>());
  }
  if (j.contains("K")) {
    const auto& k = j.at("K");
    c.rebase_period = k.is_string()
                          ? k_from_string(k.get<std::string>())
                          : k_from_string(std::to_string(k.get<long long>()));
  }
  if (j.contains("optimizer")) {
    c.opt = opt_from_string(j.at("optimizer").get<std::string>());
  }
  if (j.contains("lr")) c.lr = j.at("lr").get<double>();
  if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<long>();
  if (j.contains("grad_tol")) c.grad_tol = j.at("grad_tol").get<double>();
  if (j.contains("loss_tol")) c.loss_tol = j.at("loss_tol").get<double>();
  if (j.contains("carry_moments")) {
    c.carry_moments = j.at("carry_moments").get<bool>();
  }
  if (j.contains("trace_every")) {
    c.trace_every = j.at("trace_every").get<long>();
  }
  if (j.contains("repro_timing")) {
    c.repro_timing = j.at("repro_timing").get<bool>();
  }
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  return c;
}

}  // namespace

void write_trace_csv(std::ostream& os,
                     const std::vector<TraceRecord>& trace) {
  os << "step,loss,grad_norm,membership,rebase,wall_ms\n";
  for (const TraceRecord& r : trace) {
    os << r.step << ',' << fmt17(r.loss) << ',' << fmt17(r.grad_norm) << ','
       << fmt17(r.membership_violation) << ',' << (r.rebase ? 1 : 0) << ','
       << fmt17(r.wall_ms) << '\n';
  }
}

std::string summary_line(const RunConfig& config, const TrivEngineState& s) {
  return to_string(config.problem.name) + " k=" +
         k_to_string(config.rebase_period) + " triv=" +
         to_string(config.triv) + " opt=" + to_string(config.opt) +
         " final_loss=" + fmt17(s.last.loss) + " steps=" +
         std::to_string(s.step_index) + " membership=" +
         fmt17(s.last.membership_violation);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"manifold optimization benchmarks via dynamic trivializations"};
  app.require_subcommand(1);

  std::string problem_name, triv_name, opt_name, k_str, out_path, config_path;
  int n = 0, pk = 0;
  std::uint64_t seed = 0;
  double lr = 0.0, grad_tol = 0.0, loss_tol = 0.0, h = 1e-5;
  long steps = 0, trace_every = 0;
  bool carry = false, repro = false;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a benchmark run");
  run_cmd->add_option("--config", config_path, "JSON config file");
  auto* opt_problem =
      run_cmd->add_option("--problem", problem_name,
                          "procrustes|rayleigh|brockett|spd_recovery|"
                          "hyperbolic_centroid");
  auto* opt_n = run_cmd->add_option("--n", n, "manifold size parameter");
  auto* opt_pk = run_cmd->add_option("--pk", pk, "Stiefel width (brockett)");
  auto* opt_seed = run_cmd->add_option("--seed", seed, "master seed");
  auto* opt_triv = run_cmd->add_option(
      "--triv", triv_name,
      "lie_exp|riemannian_exp|cayley|projector|squaring|cholesky");
  auto* opt_k =
      run_cmd->add_option("--k", k_str, "rebase period K (integer or inf)");
  auto* opt_opt = run_cmd->add_option("--opt", opt_name,
                                      "sgd|momentum|adagrad|rmsprop|adam");
  auto* opt_lr = run_cmd->add_option("--lr", lr, "learning rate");
  auto* opt_steps = run_cmd->add_option("--steps", steps, "max steps");
  auto* opt_gtol = run_cmd->add_option("--grad-tol", grad_tol,
                                       "stop when |g| <= this");
  auto* opt_ltol = run_cmd->add_option("--loss-tol", loss_tol,
                                       "stop when loss <= this");
  auto* opt_carry = run_cmd->add_flag("--carry-moments", carry,
                                      "keep optimizer moments across rebases");
  auto* opt_trace =
      run_cmd->add_option("--trace-every", trace_every, "trace thinning");
  auto* opt_repro = run_cmd->add_flag(
      "--repro-timing", repro, "zero the wall_ms column for bit-exact CSV");
  auto* opt_out = run_cmd->add_option("--out", out_path, "CSV output path");

  CLI::App* check_cmd =
      app.add_subcommand("gradcheck", "finite-difference gradient check");
  std::string gc_problem;
  int gc_n = 8, gc_pk = 2;
  std::uint64_t gc_seed = 0;
  check_cmd->add_option("--problem", gc_problem, "problem name")->required();
  check_cmd->add_option("--n", gc_n, "manifold size parameter");
  check_cmd->add_option("--pk", gc_pk, "Stiefel width (brockett)");
  check_cmd->add_option("--seed", gc_seed, "master seed");
  check_cmd->add_option("--fd-step", h, "step size in [1e-8, 1e-3]");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n"
              << app.help() << std::flush;
    return 2;
  }

  try {
    if (check_cmd->parsed()) {
      ProblemSpec spec;
      spec.name = problem_from_string(gc_problem);
      spec.n = gc_n;
      spec.k = gc_pk;
      spec.seed = gc_seed;
      const BuiltProblem built = build_problem(spec);
      const Point x = initial_point(spec, built.manifold);
      const double err = gradcheck(built.objective, x, h);
      std::cout << to_string(spec.name) << " gradcheck max_rel_err="
                << fmt17(err) << "\n";
      return 0;
    }

    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "config error: cannot open " << config_path << "\n";
        return 2;
      }
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: bad JSON: " << e.what() << "\n";
        return 2;
      }
      config = config_from_json(j);
    }

    // flags override the file
    if (opt_problem->count()) {
      config.problem.name = problem_from_string(problem_name);
    } else if (config_path.empty()) {
      std::cerr << "config error: --problem is required\n"
                << run_cmd->help() << std::flush;
      return 2;
    }
    if (opt_n->count()) config.problem.n = n;
    if (opt_pk->count()) config.problem.k = pk;
    if (opt_seed->count()) config.problem.seed = seed;
    if (opt_triv->count()) config.triv = triv_from_string(triv_name);
    if (opt_k->count()) config.rebase_period = k_from_string(k_str);
    if (opt_opt->count()) config.opt = opt_from_string(opt_name);
    if (opt_lr->count()) config.lr = lr;
    if (opt_steps->count()) config.max_steps = steps;
    if (opt_gtol->count()) config.grad_tol = grad_tol;
    if (opt_ltol->count()) config.loss_tol = loss_tol;
    if (opt_carry->count()) config.carry_moments = carry;
    if (opt_trace->count()) config.trace_every = trace_every;
    if (opt_repro->count()) config.repro_timing = repro;
    if (opt_out->count()) config.out = out_path;

    const TrivEngineState final_state = execute_run(config);

    if (!config.out.empty()) {
      std::ofstream os(config.out);
      if (!os) {
        std::cerr << "io error: cannot open " << config.out
                  << " for writing\n";
        return 4;
      }
      write_trace_csv(os, final_state.history);
      if (!os.good()) {
        std::cerr << "io error: failed while writing " << config.out << "\n";
        return 4;
      }
    }
    std::cout << summary_line(config, final_state) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << " after "
              << e.partial_trace.size() << " recorded steps\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace trivopt
