#include "flee/neural/params.hpp"

#include <cmath>
#include <string>

#include "flee/core/error.hpp"

namespace flee::nn {

Network Network::zeros_like() const {
  Network z;
  for (const auto& l : message_mlp) z.message_mlp.emplace_back(l.in_dim, l.out_dim);
  z.readout = DenseLayer(readout.in_dim, readout.out_dim);
  z.head = DenseLayer(head.in_dim, head.out_dim);
  return z;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.size();
  return n;
}

std::vector<std::span<double>> Network::tensors() {
  std::vector<std::span<double>> out;
  for (auto& l : message_mlp) {
    out.emplace_back(l.weights);
    out.emplace_back(l.bias);
  }
  out.emplace_back(readout.weights);
  out.emplace_back(readout.bias);
  out.emplace_back(head.weights);
  out.emplace_back(head.bias);
  return out;
}

std::vector<std::span<const double>> Network::tensors() const {
  std::vector<std::span<const double>> out;
  for (const auto& l : message_mlp) {
    out.emplace_back(l.weights);
    out.emplace_back(l.bias);
  }
  out.emplace_back(readout.weights);
  out.emplace_back(readout.bias);
  out.emplace_back(head.weights);
  out.emplace_back(head.bias);
  return out;
}

void Network::validate(std::size_t input_dim) const {
  if (message_mlp.empty()) fail(ErrorKind::DimensionMismatch, "message MLP has no layers");
  std::size_t expect = input_dim;
  for (const auto& l : message_mlp) {
    l.validate();
    if (l.in_dim != expect) {
      fail(ErrorKind::DimensionMismatch,
           "message layer expects " + std::to_string(l.in_dim) + " inputs, chain provides " + std::to_string(expect));
    }
    expect = l.out_dim;
  }
  readout.validate();
  head.validate();
  if (readout.in_dim != expect || readout.out_dim != 1 || head.in_dim != 1 || head.out_dim != 1) {
    fail(ErrorKind::DimensionMismatch, "readout/head must be latent->1 and 1->1");
  }
}

void FeatureScaler::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = (in[i] - mean[i]) / stddev[i];
}

void MomentAccumulator::add(std::span<const double> x) {
  ++count;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum[i] += x[i];
    sum_sq[i] += x[i] * x[i];
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  count += other.count;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum[i] += other.sum[i];
    sum_sq[i] += other.sum_sq[i];
  }
}

FeatureScaler MomentAccumulator::finish(const std::vector<bool>& identity_columns) const {
  FeatureScaler s = FeatureScaler::identity(sum.size());
  if (count == 0) return s;
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (i < identity_columns.size() && identity_columns[i]) continue;
    const double mean = sum[i] / n;
    const double var = std::max(0.0, sum_sq[i] / n - mean * mean);
    const double sd = std::sqrt(var);
    s.mean[i] = mean;
    // Spreads this small relative to the mean are cancellation noise in the raw moments.
    s.stddev[i] = sd > 1e-6 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
  }
  return s;
}

ModelParams ModelParams::init(const ModelDims& dims, std::uint64_t seed) {
  if (dims.message.size() < 2) fail(ErrorKind::DimensionMismatch, "message MLP needs at least one layer");
  Rng rng(derive_seed(seed, "init"));
  ModelParams p;
  for (std::size_t i = 0; i + 1 < dims.message.size(); ++i) {
    p.net.message_mlp.push_back(DenseLayer::xavier(dims.message[i], dims.message[i + 1], rng));
  }
  p.net.readout = DenseLayer::xavier(dims.latent(), 1, rng);
  p.net.head = DenseLayer::xavier(1, 1, rng);
  p.scaler = FeatureScaler::identity(dims.message.front());
  return p;
}

ModelParams ModelParams::zeros(const ModelDims& dims) {
  ModelParams p;
  for (std::size_t i = 0; i + 1 < dims.message.size(); ++i) {
    p.net.message_mlp.emplace_back(dims.message[i], dims.message[i + 1]);
  }
  p.net.readout = DenseLayer(dims.latent(), 1);
  p.net.head = DenseLayer(1, 1);
  p.scaler = FeatureScaler::identity(dims.message.front());
  return p;
}

ModelDims ModelParams::dims() const {
  ModelDims d;
  d.message.clear();
  if (net.message_mlp.empty()) return d;
  d.message.push_back(net.message_mlp.front().in_dim);
  for (const auto& l : net.message_mlp) d.message.push_back(l.out_dim);
  return d;
}

}  // namespace flee::nn
