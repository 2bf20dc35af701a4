#include "flee/neural/optimizer.hpp"

#include <cmath>

#include "flee/core/error.hpp"
#include "flee/simd/kernels.hpp"

namespace flee::nn {

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::Sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  fail(ErrorKind::BadConfig, "unknown optimizer '" + std::string(name) + "'");
}

OptimizerState OptimizerState::make(OptimizerKind kind, double learning_rate, const Network& shape) {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorKind::BadConfig, "learning rate must be finite and >= 0");
  }
  OptimizerState s;
  s.kind = kind;
  s.learning_rate = learning_rate;
  if (kind == OptimizerKind::Adam) {
    s.first_moment = shape.zeros_like();
    s.second_moment = shape.zeros_like();
  }
  return s;
}

void optimizer_step(OptimizerState& state, Network& params, const Network& grads) {
  auto p = params.tensors();
  auto g = grads.tensors();
  if (p.size() != g.size()) fail(ErrorKind::DimensionMismatch, "gradient tensor count differs from parameters");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != g[i].size()) fail(ErrorKind::DimensionMismatch, "gradient shape differs from parameter");
  }
  const auto& k = simd::active();
  ++state.step;
  if (state.kind == OptimizerKind::Sgd) {
    for (std::size_t i = 0; i < p.size(); ++i) k.axpy(-state.learning_rate, g[i], p[i]);
    return;
  }
  auto m = state.first_moment.tensors();
  auto v = state.second_moment.tensors();
  if (m.size() != p.size()) fail(ErrorKind::DimensionMismatch, "Adam moments do not mirror the parameters");
  const double t = static_cast<double>(state.step);
  const simd::AdamCoeffs c{state.learning_rate, state.beta1, state.beta2, state.eps,
                           1.0 - std::pow(state.beta1, t), 1.0 - std::pow(state.beta2, t)};
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (m[i].size() != p[i].size()) fail(ErrorKind::DimensionMismatch, "Adam moment shape differs from parameter");
    k.adam(p[i], g[i], m[i], v[i], c);
  }
}

}  // namespace flee::nn
