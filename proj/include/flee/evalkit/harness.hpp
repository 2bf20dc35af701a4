#pragma once

#include <span>

#include "flee/evalkit/metrics.hpp"
#include "flee/fedsim/federation.hpp"
#include "flee/neural/params.hpp"

namespace flee::eval {

/// Pooled |pred - truth| of a model fed whole graphs.
ErrorStats central_error(const nn::ModelParams& params, std::span<const LabeledGraph> eval_set, gnn::FeatureMask mask);

/// Pooled |pred - truth| of a model fed each node's silo sub-graph.
ErrorStats federated_error(const nn::ModelParams& params, std::span<const LabeledGraph> eval_set,
                           const SiloAssignment& assignment, gnn::FeatureMask mask);

/// Pooled |silo oracle - whole-graph truth|. `oracle` must already be resolved
/// against the graph the labels were computed with.
ErrorStats silo_entropy_error(std::span<const LabeledGraph> eval_set, const AdjacencyMap& adj,
                              const OracleConfig& oracle, const SiloAssignment& assignment);

struct ExperimentSetup {
  std::span<const LabeledGraph> train_set;
  std::span<const LabeledGraph> eval_set;
  SiloAssignment assignment;
  nn::ModelDims dims;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::size_t sync_every = 10;
  fed::WeightPolicy weights = fed::WeightPolicy::BySampleCount;
  std::uint64_t seed = 0;
};

nn::ModelParams train_central(const ExperimentSetup& setup, gnn::FeatureMask mask);
fed::FederationResult train_federated(const ExperimentSetup& setup, gnn::FeatureMask mask);

/// Trainer for ablation_grid: same seed for every cell; central cells are
/// evaluated on whole graphs, federated cells on silo sub-graphs.
AblationTrainer make_ablation_trainer(const ExperimentSetup& setup);

}  // namespace flee::eval
