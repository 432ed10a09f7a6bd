#include "trivopt/optim.hpp"

#include <cmath>

namespace trivopt {

std::string to_string(OptKind kind) {
  switch (kind) {
    case OptKind::Sgd:
      return "sgd";
    case OptKind::MomentumSgd:
      return "momentum";
    case OptKind::Adagrad:
      return "adagrad";
    case OptKind::RmsProp:
      return "rmsprop";
    case OptKind::Adam:
      return "adam";
  }
  return "?";
}

OptimizerState make_optimizer(OptKind kind, double lr, OptimizerHyper hyper) {
  if (!(lr > 0.0)) throw StructureError("optimizer: lr must be positive");
  if (!(hyper.epsilon > 0.0)) {
    throw StructureError("optimizer: epsilon must be positive");
  }
  OptimizerState s;
  s.kind = kind;
  s.lr = lr;
  s.hyper = hyper;
  return s;
}

StepResult step(const OptimizerState& s, std::span<const double> y,
                std::span<const double> g) {
  const std::size_t dim = y.size();
  if (g.size() != dim) {
    throw ShapeError("optimizer step: gradient length mismatch");
  }
  if (!s.m1.empty() && s.m1.size() != dim) {
    throw ShapeError("optimizer step: state sized for a different dimension");
  }
  for (double v : g) {
    if (!std::isfinite(v)) {
      throw StructureError("optimizer step: non-finite gradient entry");
    }
  }

  StepResult out;
  out.state = s;
  out.y.assign(y.begin(), y.end());
  OptimizerState& st = out.state;
  st.step_count = s.step_count + 1;
  const double lr = s.lr;
  const OptimizerHyper& h = s.hyper;

  switch (s.kind) {
    case OptKind::Sgd:
      for (std::size_t i = 0; i < dim; ++i) out.y[i] -= lr * g[i];
      break;
    case OptKind::MomentumSgd: {
      if (st.m1.empty()) st.m1.assign(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        st.m1[i] = h.momentum * st.m1[i] + g[i];
        out.y[i] -= lr * st.m1[i];
      }
      break;
    }
    case OptKind::Adagrad: {
      if (st.m1.empty()) st.m1.assign(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        st.m1[i] += g[i] * g[i];
        out.y[i] -= lr * g[i] / std::sqrt(st.m1[i] + h.epsilon);
      }
      break;
    }
    case OptKind::RmsProp: {
      if (st.m1.empty()) st.m1.assign(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        st.m1[i] = h.alpha * st.m1[i] + (1.0 - h.alpha) * g[i] * g[i];
        out.y[i] -= lr * g[i] / std::sqrt(st.m1[i] + h.epsilon);
      }
      break;
    }
    case OptKind::Adam: {
      if (st.m1.empty()) st.m1.assign(dim, 0.0);
      if (st.m2.empty()) st.m2.assign(dim, 0.0);
      const double bc1 = 1.0 - std::pow(h.beta1, st.step_count);
      const double bc2 = 1.0 - std::pow(h.beta2, st.step_count);
      for (std::size_t i = 0; i < dim; ++i) {
        st.m1[i] = h.beta1 * st.m1[i] + (1.0 - h.beta1) * g[i];
        st.m2[i] = h.beta2 * st.m2[i] + (1.0 - h.beta2) * g[i] * g[i];
        const double mhat = st.m1[i] / bc1;
        const double vhat = st.m2[i] / bc2;
        out.y[i] -= lr * mhat / (std::sqrt(vhat) + h.epsilon);
      }
      break;
    }
  }
  return out;
}

OptimizerState reset(const OptimizerState& s) {
  OptimizerState out = s;
  out.step_count = 0;
  std::fill(out.m1.begin(), out.m1.end(), 0.0);
  std::fill(out.m2.begin(), out.m2.end(), 0.0);
  return out;
}

}  // namespace trivopt
