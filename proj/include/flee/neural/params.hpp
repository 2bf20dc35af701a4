#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flee/neural/dense.hpp"

namespace flee::nn {

/// Trainable part of the model: shared message MLP, 32->1 readout and the
/// 1->1 head that feeds the sigmoid.
struct Network {
  std::vector<DenseLayer> message_mlp;
  DenseLayer readout;
  DenseLayer head;

  /// Same shapes, all zeros.
  Network zeros_like() const;
  std::size_t parameter_count() const;
  /// Weights then bias of each layer: message layers, readout, head.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  /// Throws DimensionMismatch if the chain does not connect.
  void validate(std::size_t input_dim) const;
};

/// Per-feature z-score statistics over message inputs.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  static FeatureScaler identity(std::size_t dim) { return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)}; }
  void apply(std::span<const double> in, std::span<double> out) const;
};

/// Streaming moments for building a FeatureScaler; mergeable across silos.
struct MomentAccumulator {
  std::size_t count = 0;
  std::vector<double> sum;
  std::vector<double> sum_sq;

  explicit MomentAccumulator(std::size_t dim = 0) : sum(dim, 0.0), sum_sq(dim, 0.0) {}
  void add(std::span<const double> x);
  void merge(const MomentAccumulator& other);
  /// Columns flagged in `identity_columns` get mean 0 / std 1; zero-variance
  /// columns get std 1.
  FeatureScaler finish(const std::vector<bool>& identity_columns) const;
};

struct ModelDims {
  std::vector<std::size_t> message{26, 64, 32};  // input, hidden..., latent

  std::size_t latent() const { return message.back(); }
  bool operator==(const ModelDims&) const = default;
};

struct ModelParams {
  Network net;
  FeatureScaler scaler;
  std::uint32_t mask_bits = 0b111;  // feature mask the model was trained with (V=1, T=2, A=4)

  /// Xavier initialization fully determined by `seed`; identity scaler.
  static ModelParams init(const ModelDims& dims, std::uint64_t seed);
  /// All-zero parameters with identity scaler.
  static ModelParams zeros(const ModelDims& dims);
  ModelDims dims() const;
};

}  // namespace flee::nn
