#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flee/eegnn/model.hpp"
#include "flee/flowgraph/silo.hpp"
#include "flee/neural/optimizer.hpp"
#include "flee/neural/params.hpp"

namespace flee::fed {

enum class WeightPolicy { Uniform, ByNodeCount, BySampleCount };

std::string_view to_string(WeightPolicy policy);
/// Throws BadConfig.
WeightPolicy parse_weight_policy(std::string_view name);

struct FederationConfig {
  std::size_t total_epochs = 100;
  std::size_t sync_every = 10;
  WeightPolicy weights = WeightPolicy::BySampleCount;
  std::uint64_t seed = 0;

  /// Throws BadConfig unless sync_every divides total_epochs.
  void validate() const;
  std::size_t rounds() const { return total_epochs / sync_every; }
};

/// One federated client's private data: silo sub-graphs labelled with the
/// whole-graph oracle scores of the silo's nodes.
struct SiloCorpus {
  Region region = Region::West;
  std::size_t node_count = 0;
  std::vector<LabeledGraph> graphs;

  bool empty() const { return node_count == 0 || graphs.empty(); }
  /// Training samples: nodes x graphs.
  std::size_t sample_count() const;
};

/// One SiloCorpus per region in canonical region order (regions without nodes
/// yield empty silos). Throws NodeWithoutRegion.
std::vector<SiloCorpus> partition_corpus(std::span<const LabeledGraph> corpus, const SiloAssignment& assignment);

/// Called with every graph handed to a silo's local training.
using GraphObserver = std::function<void(Region, const FlowGraph&)>;

struct LocalResult {
  nn::ModelParams local;
  nn::Network delta;  // local - global, parameter-wise
  std::vector<double> losses;
  bool empty_silo = false;
};

/// Trains a copy of `global` on the silo for `options.epochs` epochs with the
/// silo's own optimizer state. The global scaler is used as is.
LocalResult local_train(const nn::ModelParams& global, const SiloCorpus& silo, nn::OptimizerState& opt,
                        gnn::FeatureMask mask, const gnn::TrainOptions& options, const GraphObserver& observer = {});

/// Normalized weights per silo; empty silos get 0. Throws EmptyCorpus when
/// every silo is empty.
std::vector<double> aggregation_weights(WeightPolicy policy, std::span<const SiloCorpus> silos);

/// global + sum_k w_k delta_k, accumulated in silo order. Throws ShapeMismatch.
nn::ModelParams aggregate(const nn::ModelParams& global, std::span<const nn::Network> deltas,
                          std::span<const double> weights);

/// Feature scaler pooled from per-silo moment summaries.
nn::FeatureScaler federated_scaler(std::span<const SiloCorpus> silos, gnn::FeatureMask mask);

struct SiloRoundEntry {
  Region region = Region::West;
  std::vector<double> losses;
  double weight = 0.0;
  std::size_t samples = 0;
  bool empty = false;
};

struct RoundLog {
  std::size_t round = 0;
  std::vector<SiloRoundEntry> silos;
  std::string digest;  // CRC-32 of the aggregated checkpoint bytes
  double wall_seconds = 0.0;
};

struct FederationOptions {
  FederationConfig config;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
  double learning_rate = 1e-3;
  gnn::FeatureMask mask = gnn::FeatureMask::all();
  /// Processing order of silos inside a round (indices into the silo list);
  /// empty means canonical order. Aggregation always uses canonical order.
  std::vector<std::size_t> silo_schedule;
  GraphObserver observer;
  std::function<void(const RoundLog&, const nn::ModelParams&)> on_round;
};

struct FederationResult {
  nn::ModelParams global;
  std::vector<RoundLog> rounds;
};

/// Synchronous rounds of dispatch -> local training -> weighted aggregation,
/// starting from `initial` (its scaler is replaced by the pooled one).
FederationResult run_federation(const nn::ModelParams& initial, std::span<const SiloCorpus> silos,
                                const FederationOptions& options);

/// One JSON object per round (no wall-clock fields, so logs are reproducible).
std::string round_logs_to_jsonl(const std::vector<RoundLog>& rounds);

/// Scores for every node of g, each computed from its own silo's sub-graph.
std::map<std::string, double> predict_on_silos(const nn::ModelParams& params, const FlowGraph& g,
                                               const SiloAssignment& assignment, gnn::FeatureMask mask);

}  // namespace flee::fed
