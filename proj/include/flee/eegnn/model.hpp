#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flee/flowgraph/features.hpp"
#include "flee/flowgraph/graph.hpp"
#include "flee/neural/optimizer.hpp"
#include "flee/neural/params.hpp"

namespace flee::gnn {

/// Subset of {V, T, A} kept in edge features.
class FeatureMask {
 public:
  static constexpr std::uint32_t kValue = 1;
  static constexpr std::uint32_t kTonnage = 2;
  static constexpr std::uint32_t kMiles = 4;

  constexpr FeatureMask() = default;
  explicit constexpr FeatureMask(std::uint32_t bits) : bits_(bits & 7u) {}

  static constexpr FeatureMask all() { return FeatureMask(7); }
  static constexpr FeatureMask none() { return FeatureMask(0); }
  /// Accepts letters V/T/A in any order, or NONE. Throws BadConfig.
  static FeatureMask parse(std::string_view text);

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool keeps(std::uint32_t attr) const { return (bits_ & attr) != 0; }
  /// Column label as used in the ablation table (VAT, VT, VA, TA, V, T, A, NONE).
  std::string name() const;
  /// True for each of the 26 message columns that the mask zeroes.
  std::vector<bool> masked_message_columns() const;

  constexpr bool operator==(const FeatureMask&) const = default;

 private:
  std::uint32_t bits_ = 7;
};

/// The eight masks in ablation-table column order.
std::array<FeatureMask, 8> ablation_masks();

/// Zeroes every column whose attribute is not kept. Idempotent.
EdgeFeatureVector apply_mask(FeatureMask mask, const EdgeFeatureVector& features);

/// Masked and scaled message inputs ([lat, lon, 24 edge features]) for every
/// node of a graph, in canonical node and neighbor order.
struct PreparedGraph {
  std::vector<std::string> node_ids;
  std::vector<std::size_t> offsets;  // node i owns messages [offsets[i], offsets[i+1])
  std::vector<double> inputs;        // message-major, kMessageDim per message

  std::size_t node_count() const { return node_ids.size(); }
  std::size_t message_count(std::size_t node) const { return offsets[node + 1] - offsets[node]; }
  std::span<const double> message(std::size_t index) const {
    return std::span<const double>(inputs).subspan(index * kMessageDim, kMessageDim);
  }
};

/// Messages after masking, before scaling.
PreparedGraph raw_messages(const FlowGraph& g, FeatureMask mask);
PreparedGraph prepare(const FlowGraph& g, FeatureMask mask, const nn::FeatureScaler& scaler);

/// Adds every raw (masked) message of g to the accumulator.
void accumulate_moments(const FlowGraph& g, FeatureMask mask, nn::MomentAccumulator& acc);
/// Z-score statistics over all messages of the given graphs; masked columns
/// keep identity scaling.
nn::FeatureScaler fit_scaler(std::span<const LabeledGraph> corpus, FeatureMask mask);

struct NodeActivationTrace {
  std::vector<std::vector<double>> latents;  // u_i per message
  std::vector<double> aggregate;             // U
  double readout = 0.0;
  double pre_sigmoid = 0.0;
  double score = 0.0;
};

/// Throws UnknownNode, DimensionMismatch.
NodeActivationTrace forward_node(const nn::ModelParams& params, const FlowGraph& g, std::string_view node,
                                 FeatureMask mask);

/// Scores of every node of a prepared graph, in its node order.
std::vector<double> forward_prepared(const nn::Network& net, const PreparedGraph& graph);

std::map<std::string, double> forward_graph(const nn::ModelParams& params, const FlowGraph& g, FeatureMask mask);

struct GradientResult {
  double loss = 0.0;
  nn::Network grads;
};

/// MSE over nodes and gradients of every parameter. `targets` follows the
/// prepared node order.
GradientResult backward_prepared(const nn::Network& net, const PreparedGraph& graph, std::span<const double> targets);

/// Throws MissingTarget when a node has no label.
GradientResult backward_graph(const nn::ModelParams& params, const FlowGraph& g,
                              const std::map<std::string, double>& targets, FeatureMask mask);

/// A prepared graph with targets aligned to its node order.
struct TrainingExample {
  PreparedGraph graph;
  std::vector<double> targets;
};

/// Throws MissingTarget.
TrainingExample make_example(const LabeledGraph& lg, FeatureMask mask, const nn::FeatureScaler& scaler);

struct TrainOptions {
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  /// Global index of the first epoch; shuffles are derived from it so a run
  /// split into chunks replays the same graph order.
  std::size_t epoch_offset = 0;
};

/// Full passes over the corpus, graph order shuffled per epoch, one optimizer
/// step per graph. Returns the mean pre-step loss of each epoch.
/// Throws EmptyCorpus.
std::vector<double> train_examples(nn::Network& net, std::span<const TrainingExample> corpus,
                                   nn::OptimizerState& opt, const TrainOptions& options);

struct TrainOutcome {
  nn::ModelParams params;
  std::vector<double> loss_history;
};

/// Fits the scaler on `corpus` (masked columns excluded), then trains.
TrainOutcome train(nn::ModelParams params, std::span<const LabeledGraph> corpus, nn::OptimizerState& opt,
                   FeatureMask mask, const TrainOptions& options);

/// `node,score`
std::string predictions_to_csv(const std::map<std::string, double>& scores);

}  // namespace flee::gnn
