#include "flee/neural/dense.hpp"

#include <string>

#include "flee/core/error.hpp"
#include "flee/simd/kernels.hpp"

namespace flee::nn {

DenseLayer DenseLayer::xavier(std::size_t in, std::size_t out, Rng& rng) {
  DenseLayer layer(in, out);
  const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
  for (auto& w : layer.weights) w = rng.uniform(-bound, bound);
  return layer;
}

void DenseLayer::validate() const {
  if (in_dim == 0 || out_dim == 0 || weights.size() != in_dim * out_dim || bias.size() != out_dim) {
    fail(ErrorKind::DimensionMismatch, "dense layer " + std::to_string(in_dim) + "x" + std::to_string(out_dim) +
                                           " holds " + std::to_string(weights.size()) + " weights");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) fail(ErrorKind::InternalInvariant, "non-finite weight");
  }
  for (double b : bias) {
    if (!std::isfinite(b)) fail(ErrorKind::InternalInvariant, "non-finite bias");
  }
}

void dense_forward(const DenseLayer& layer, std::span<const double> x, std::span<double> y) {
  if (x.size() != layer.in_dim || y.size() != layer.out_dim) {
    fail(ErrorKind::DimensionMismatch, "dense_forward expects " + std::to_string(layer.in_dim) + " inputs, got " +
                                           std::to_string(x.size()));
  }
  simd::active().gemv(layer.weights, layer.bias, x, y);
}

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x) {
  std::vector<double> y(layer.out_dim);
  dense_forward(layer, x, y);
  return y;
}

void dense_backward_acc(const DenseLayer& layer, std::span<const double> x, std::span<const double> upstream,
                        DenseLayer& grad, std::span<double> grad_x) {
  if (x.size() != layer.in_dim || upstream.size() != layer.out_dim || grad.weights.size() != layer.weights.size() ||
      grad.bias.size() != layer.bias.size() || (!grad_x.empty() && grad_x.size() != layer.in_dim)) {
    fail(ErrorKind::DimensionMismatch, "dense_backward shapes inconsistent");
  }
  const auto& k = simd::active();
  k.ger_acc(upstream, x, grad.weights);
  k.axpy(1.0, upstream, grad.bias);
  if (!grad_x.empty()) {
    std::fill(grad_x.begin(), grad_x.end(), 0.0);
    k.gemv_t_acc(layer.weights, upstream, grad_x);
  }
}

DenseGrads dense_backward(const DenseLayer& layer, std::span<const double> x, std::span<const double> upstream) {
  DenseLayer acc(layer.in_dim, layer.out_dim);
  DenseGrads g;
  g.input.assign(layer.in_dim, 0.0);
  dense_backward_acc(layer, x, upstream, acc, g.input);
  g.weights = std::move(acc.weights);
  g.bias = std::move(acc.bias);
  return g;
}

LossResult mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty()) {
    fail(ErrorKind::LengthMismatch, "mse_loss over " + std::to_string(pred.size()) + " predictions and " +
                                        std::to_string(target.size()) + " targets");
  }
  const double n = static_cast<double>(pred.size());
  LossResult r;
  r.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    r.loss += diff * diff;
    r.grad[i] = 2.0 * diff / n;
  }
  r.loss /= n;
  return r;
}

}  // namespace flee::nn
