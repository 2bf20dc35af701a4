#include "flee/evalkit/harness.hpp"

namespace flee::eval {

ErrorStats central_error(const nn::ModelParams& params, std::span<const LabeledGraph> eval_set, gnn::FeatureMask mask) {
  ErrorPool pool;
  for (const auto& lg : eval_set) pool.add(gnn::forward_graph(params, lg.graph, mask), lg.labels);
  return pool.stats();
}

ErrorStats federated_error(const nn::ModelParams& params, std::span<const LabeledGraph> eval_set,
                           const SiloAssignment& assignment, gnn::FeatureMask mask) {
  ErrorPool pool;
  for (const auto& lg : eval_set) pool.add(fed::predict_on_silos(params, lg.graph, assignment, mask), lg.labels);
  return pool.stats();
}

ErrorStats silo_entropy_error(std::span<const LabeledGraph> eval_set, const AdjacencyMap& adj,
                              const OracleConfig& oracle, const SiloAssignment& assignment) {
  ErrorPool pool;
  for (const auto& lg : eval_set) pool.add(silo_oracle_scores(lg.graph, adj, oracle, assignment), lg.labels);
  return pool.stats();
}

nn::ModelParams train_central(const ExperimentSetup& setup, gnn::FeatureMask mask) {
  auto params = nn::ModelParams::init(setup.dims, setup.seed);
  auto opt = nn::OptimizerState::make(setup.optimizer, setup.learning_rate, params.net);
  gnn::TrainOptions options;
  options.epochs = setup.epochs;
  options.seed = setup.seed;
  return gnn::train(std::move(params), setup.train_set, opt, mask, options).params;
}

fed::FederationResult train_federated(const ExperimentSetup& setup, gnn::FeatureMask mask) {
  const auto silos = fed::partition_corpus(setup.train_set, setup.assignment);
  fed::FederationOptions options;
  options.config.total_epochs = setup.epochs;
  options.config.sync_every = setup.sync_every;
  options.config.weights = setup.weights;
  options.config.seed = setup.seed;
  options.optimizer = setup.optimizer;
  options.learning_rate = setup.learning_rate;
  options.mask = mask;
  return fed::run_federation(nn::ModelParams::init(setup.dims, setup.seed), silos, options);
}

AblationTrainer make_ablation_trainer(const ExperimentSetup& setup) {
  return [setup](gnn::FeatureMask mask, TrainingMode mode) {
    if (mode == TrainingMode::Central) return central_error(train_central(setup, mask), setup.eval_set, mask);
    return federated_error(train_federated(setup, mask).global, setup.eval_set, setup.assignment, mask);
  };
}

}  // namespace flee::eval
