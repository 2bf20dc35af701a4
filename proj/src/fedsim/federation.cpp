#include "flee/fedsim/federation.hpp"

#include <chrono>

#include <json.hpp>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"
#include "flee/neural/checkpoint.hpp"
#include "flee/simd/kernels.hpp"

namespace flee::fed {

std::string_view to_string(WeightPolicy policy) {
  switch (policy) {
    case WeightPolicy::Uniform: return "uniform";
    case WeightPolicy::ByNodeCount: return "by_node_count";
    case WeightPolicy::BySampleCount: return "by_sample_count";
  }
  return "?";
}

WeightPolicy parse_weight_policy(std::string_view name) {
  for (auto p : {WeightPolicy::Uniform, WeightPolicy::ByNodeCount, WeightPolicy::BySampleCount}) {
    if (to_string(p) == name) return p;
  }
  fail(ErrorKind::BadConfig, "unknown aggregation weights '" + std::string(name) + "'");
}

void FederationConfig::validate() const {
  if (sync_every == 0) fail(ErrorKind::BadConfig, "sync_every must be >= 1");
  if (total_epochs % sync_every != 0) {
    fail(ErrorKind::BadConfig, "sync_every (" + std::to_string(sync_every) + ") must divide total_epochs (" +
                                   std::to_string(total_epochs) + ")");
  }
}

std::size_t SiloCorpus::sample_count() const {
  std::size_t n = 0;
  for (const auto& lg : graphs) n += lg.graph.node_count();
  return n;
}

std::vector<SiloCorpus> partition_corpus(std::span<const LabeledGraph> corpus, const SiloAssignment& assignment) {
  std::vector<SiloCorpus> silos;
  for (Region r : kAllRegions) {
    SiloCorpus s;
    s.region = r;
    s.node_count = assignment.count(r);
    silos.push_back(std::move(s));
  }
  for (const auto& lg : corpus) {
    for (auto& silo : silos) {
      if (silo.node_count == 0) continue;
      LabeledGraph part;
      part.graph = extract_silo(lg.graph, assignment, silo.region);
      if (part.graph.node_count() == 0) continue;
      for (const auto& n : part.graph.nodes()) {
        auto it = lg.labels.find(n.id);
        if (it == lg.labels.end()) fail(ErrorKind::MissingTarget, "no whole-graph label for node " + n.id);
        part.labels.emplace(n.id, it->second);
      }
      silo.graphs.push_back(std::move(part));
    }
  }
  for (auto& silo : silos) {
    if (!silo.graphs.empty()) silo.node_count = silo.graphs.front().graph.node_count();
  }
  return silos;
}

namespace {

nn::Network difference(const nn::Network& a, const nn::Network& b) {
  nn::Network d = a;
  auto dt = d.tensors();
  auto bt = b.tensors();
  for (std::size_t i = 0; i < dt.size(); ++i) {
    for (std::size_t j = 0; j < dt[i].size(); ++j) dt[i][j] -= bt[i][j];
  }
  return d;
}

}  // namespace

LocalResult local_train(const nn::ModelParams& global, const SiloCorpus& silo, nn::OptimizerState& opt,
                        gnn::FeatureMask mask, const gnn::TrainOptions& options, const GraphObserver& observer) {
  LocalResult r;
  r.local = global;
  if (silo.empty()) {
    r.empty_silo = true;
    r.delta = global.net.zeros_like();
    return r;
  }
  std::vector<gnn::TrainingExample> examples;
  examples.reserve(silo.graphs.size());
  for (const auto& lg : silo.graphs) {
    if (observer) observer(silo.region, lg.graph);
    examples.push_back(gnn::make_example(lg, mask, global.scaler));
  }
  r.losses = gnn::train_examples(r.local.net, examples, opt, options);
  r.delta = difference(r.local.net, global.net);
  return r;
}

std::vector<double> aggregation_weights(WeightPolicy policy, std::span<const SiloCorpus> silos) {
  std::vector<double> w(silos.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < silos.size(); ++k) {
    if (silos[k].empty()) continue;
    switch (policy) {
      case WeightPolicy::Uniform: w[k] = 1.0; break;
      case WeightPolicy::ByNodeCount: w[k] = static_cast<double>(silos[k].node_count); break;
      case WeightPolicy::BySampleCount: w[k] = static_cast<double>(silos[k].sample_count()); break;
    }
    total += w[k];
  }
  if (!(total > 0.0)) fail(ErrorKind::EmptyCorpus, "every silo is empty");
  for (double& x : w) x /= total;
  return w;
}

nn::ModelParams aggregate(const nn::ModelParams& global, std::span<const nn::Network> deltas,
                          std::span<const double> weights) {
  if (deltas.size() != weights.size()) fail(ErrorKind::ShapeMismatch, "one weight per silo delta required");
  nn::ModelParams out = global;
  auto acc_net = global.net.zeros_like();
  auto acc = acc_net.tensors();
  const auto& k = simd::active();
  for (std::size_t s = 0; s < deltas.size(); ++s) {
    auto dt = deltas[s].tensors();
    if (dt.size() != acc.size()) fail(ErrorKind::ShapeMismatch, "silo delta has a different layer layout");
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (dt[i].size() != acc[i].size()) fail(ErrorKind::ShapeMismatch, "silo delta tensor shape differs");
      if (weights[s] != 0.0) k.axpy(weights[s], dt[i], acc[i]);
    }
  }
  auto pt = out.net.tensors();
  for (std::size_t i = 0; i < pt.size(); ++i) k.axpy(1.0, acc[i], pt[i]);
  return out;
}

nn::FeatureScaler federated_scaler(std::span<const SiloCorpus> silos, gnn::FeatureMask mask) {
  nn::MomentAccumulator pooled(kMessageDim);
  for (const auto& silo : silos) {
    nn::MomentAccumulator local(kMessageDim);
    for (const auto& lg : silo.graphs) gnn::accumulate_moments(lg.graph, mask, local);
    pooled.merge(local);
  }
  return pooled.finish(mask.masked_message_columns());
}

FederationResult run_federation(const nn::ModelParams& initial, std::span<const SiloCorpus> silos,
                                const FederationOptions& options) {
  const auto& cfg = options.config;
  cfg.validate();
  if (silos.empty()) fail(ErrorKind::EmptyCorpus, "no silos");
  std::vector<std::size_t> schedule = options.silo_schedule;
  if (schedule.empty()) {
    for (std::size_t k = 0; k < silos.size(); ++k) schedule.push_back(k);
  }
  if (schedule.size() != silos.size()) fail(ErrorKind::BadConfig, "silo schedule must list every silo once");

  FederationResult result;
  result.global = initial;
  result.global.net.validate(kMessageDim);
  result.global.scaler = federated_scaler(silos, options.mask);
  result.global.mask_bits = options.mask.bits();

  const auto weights = aggregation_weights(cfg.weights, silos);
  std::vector<nn::OptimizerState> optimizers;
  for (std::size_t k = 0; k < silos.size(); ++k) {
    optimizers.push_back(nn::OptimizerState::make(options.optimizer, options.learning_rate, result.global.net));
  }

  for (std::size_t round = 0; round < cfg.rounds(); ++round) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<LocalResult> locals(silos.size());
    gnn::TrainOptions topt;
    topt.epochs = cfg.sync_every;
    topt.seed = cfg.seed;
    topt.epoch_offset = round * cfg.sync_every;
    for (std::size_t k : schedule) {
      locals[k] = local_train(result.global, silos[k], optimizers[k], options.mask, topt, options.observer);
    }
    std::vector<nn::Network> deltas;
    deltas.reserve(silos.size());
    for (auto& l : locals) deltas.push_back(std::move(l.delta));
    result.global = aggregate(result.global, deltas, weights);

    RoundLog log;
    log.round = round;
    for (std::size_t k = 0; k < silos.size(); ++k) {
      log.silos.push_back(SiloRoundEntry{silos[k].region, locals[k].losses, weights[k], silos[k].sample_count(),
                                         locals[k].empty_silo});
    }
    log.digest = hex32(nn::parameter_digest(result.global));
    log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.on_round) options.on_round(log, result.global);
    result.rounds.push_back(std::move(log));
  }
  return result;
}

std::string round_logs_to_jsonl(const std::vector<RoundLog>& rounds) {
  std::string out;
  for (const auto& r : rounds) {
    nlohmann::ordered_json j;
    j["round"] = r.round;
    j["silos"] = nlohmann::ordered_json::array();
    for (const auto& s : r.silos) {
      j["silos"].push_back({{"region", std::string(to_string(s.region))},
                            {"losses", s.losses},
                            {"weight", s.weight},
                            {"samples", s.samples},
                            {"empty", s.empty}});
    }
    j["parameter_digest"] = r.digest;
    out += j.dump() + "\n";
  }
  return out;
}

std::map<std::string, double> predict_on_silos(const nn::ModelParams& params, const FlowGraph& g,
                                               const SiloAssignment& assignment, gnn::FeatureMask mask) {
  std::map<std::string, double> out;
  for (Region r : kAllRegions) {
    const FlowGraph silo = extract_silo(g, assignment, r);
    if (silo.node_count() == 0) continue;
    for (const auto& [node, s] : gnn::forward_graph(params, silo, mask)) out.emplace(node, s);
  }
  return out;
}

}  // namespace flee::fed
