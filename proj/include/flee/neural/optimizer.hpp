#pragma once

#include <cstdint>
#include <string_view>

#include "flee/neural/params.hpp"

namespace flee::nn {

enum class OptimizerKind { Sgd, Adam };

std::string_view to_string(OptimizerKind kind);
/// Throws BadConfig.
OptimizerKind parse_optimizer(std::string_view name);

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Network first_moment;   // Adam only; shapes mirror the parameters
  Network second_moment;
  std::uint64_t step = 0;

  static OptimizerState make(OptimizerKind kind, double learning_rate, const Network& shape);
};

/// SGD: p -= lr g. Adam: bias-corrected update. Throws DimensionMismatch.
void optimizer_step(OptimizerState& state, Network& params, const Network& grads);

}  // namespace flee::nn
