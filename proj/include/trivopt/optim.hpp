#pragma once

#include <span>
#include <string>
#include <vector>

#include "trivopt/densela.hpp"

namespace trivopt {

enum class OptKind { Sgd, MomentumSgd, Adagrad, RmsProp, Adam };

std::string to_string(OptKind kind);

struct OptimizerHyper {
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double alpha = 0.99;  // RMSprop decay
  double epsilon = 1e-8;
};

/// Value-semantic optimizer state over flat coordinate arrays. Buffers are
/// sized lazily on the first step; step never mutates its input.
struct OptimizerState {
  OptKind kind = OptKind::Sgd;
  double lr = 1e-3;
  long step_count = 0;
  std::vector<double> m1;  // momentum / first moment / accumulator
  std::vector<double> m2;  // second moment (Adam only)
  OptimizerHyper hyper;
};

OptimizerState make_optimizer(OptKind kind, double lr,
                              OptimizerHyper hyper = {});

struct StepResult {
  OptimizerState state;
  std::vector<double> y;
};

/// One update step; throws on length mismatch or non-finite gradient
/// entries.
StepResult step(const OptimizerState& s, std::span<const double> y,
                std::span<const double> g);

/// Zeroed buffers and step counter; hyperparameters preserved.
OptimizerState reset(const OptimizerState& s);

}  // namespace trivopt
