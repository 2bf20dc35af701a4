#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "flee/core/rng.hpp"

namespace flee::nn {

/// y = W x + b with W stored row-major as out_dim x in_dim.
struct DenseLayer {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  DenseLayer() = default;
  /// Zero-initialized layer.
  DenseLayer(std::size_t in, std::size_t out) : in_dim(in), out_dim(out), weights(in * out, 0.0), bias(out, 0.0) {}

  /// Uniform Xavier weights in +-sqrt(6 / (in + out)), zero bias.
  static DenseLayer xavier(std::size_t in, std::size_t out, Rng& rng);

  double& w(std::size_t row, std::size_t col) { return weights[row * in_dim + col]; }
  double w(std::size_t row, std::size_t col) const { return weights[row * in_dim + col]; }

  /// Throws DimensionMismatch / InternalInvariant (non-finite parameter).
  void validate() const;
};

/// Throws DimensionMismatch.
std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x);
void dense_forward(const DenseLayer& layer, std::span<const double> x, std::span<double> y);

struct DenseGrads {
  std::vector<double> weights;  // upstream (outer) x
  std::vector<double> bias;     // upstream
  std::vector<double> input;    // W^T upstream
};

/// Throws DimensionMismatch.
DenseGrads dense_backward(const DenseLayer& layer, std::span<const double> x, std::span<const double> upstream);

/// Accumulating form used by the model: adds into grad.weights / grad.bias and
/// writes W^T upstream into grad_x when it is non-empty.
void dense_backward_acc(const DenseLayer& layer, std::span<const double> x, std::span<const double> upstream,
                        DenseLayer& grad, std::span<double> grad_x);

inline double relu(double x) { return x > 0.0 ? x : 0.0; }
inline double relu_grad(double x) { return x > 0.0 ? 1.0 : 0.0; }

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}
inline double sigmoid_grad(double x) {
  const double s = sigmoid(x);
  return s * (1.0 - s);
}

struct LossResult {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Mean squared error and its gradient 2 (pred - target) / n. Throws LengthMismatch.
LossResult mse_loss(std::span<const double> pred, std::span<const double> target);

}  // namespace flee::nn
