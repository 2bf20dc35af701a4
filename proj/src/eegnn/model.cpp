#include "flee/eegnn/model.hpp"

#include <algorithm>
#include <numeric>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"
#include "flee/core/rng.hpp"
#include "flee/simd/kernels.hpp"

namespace flee::gnn {

FeatureMask FeatureMask::parse(std::string_view text) {
  if (text == "NONE" || text == "none") return none();
  std::uint32_t bits = 0;
  for (char c : text) {
    std::uint32_t bit = 0;
    switch (c) {
      case 'V': case 'v': bit = kValue; break;
      case 'T': case 't': bit = kTonnage; break;
      case 'A': case 'a': bit = kMiles; break;
      default: fail(ErrorKind::BadConfig, "feature mask '" + std::string(text) + "': expected letters V, T, A or NONE");
    }
    if (bits & bit) fail(ErrorKind::BadConfig, "feature mask '" + std::string(text) + "' repeats a letter");
    bits |= bit;
  }
  if (bits == 0) fail(ErrorKind::BadConfig, "empty feature mask; use NONE");
  return FeatureMask(bits);
}

std::string FeatureMask::name() const {
  switch (bits_) {
    case 7: return "VAT";
    case 3: return "VT";
    case 5: return "VA";
    case 6: return "TA";
    case 1: return "V";
    case 2: return "T";
    case 4: return "A";
    default: return "NONE";
  }
}

std::vector<bool> FeatureMask::masked_message_columns() const {
  std::vector<bool> masked(kMessageDim, false);
  for (std::size_t c = 0; c < static_cast<std::size_t>(kCommodityCount); ++c) {
    masked[2 + 3 * c + 0] = !keeps(kValue);
    masked[2 + 3 * c + 1] = !keeps(kTonnage);
    masked[2 + 3 * c + 2] = !keeps(kMiles);
  }
  return masked;
}

std::array<FeatureMask, 8> ablation_masks() {
  return {FeatureMask(7), FeatureMask(3), FeatureMask(5), FeatureMask(6),
          FeatureMask(1), FeatureMask(2), FeatureMask(4), FeatureMask(0)};
}

EdgeFeatureVector apply_mask(FeatureMask mask, const EdgeFeatureVector& features) {
  EdgeFeatureVector out = features;
  for (std::size_t c = 0; c < static_cast<std::size_t>(kCommodityCount); ++c) {
    if (!mask.keeps(FeatureMask::kValue)) out[3 * c + 0] = 0.0;
    if (!mask.keeps(FeatureMask::kTonnage)) out[3 * c + 1] = 0.0;
    if (!mask.keeps(FeatureMask::kMiles)) out[3 * c + 2] = 0.0;
  }
  return out;
}

PreparedGraph raw_messages(const FlowGraph& g, FeatureMask mask) {
  const auto per_node = build_all_edge_features(g);
  PreparedGraph pg;
  pg.offsets.push_back(0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    pg.node_ids.push_back(g.nodes()[i].id);
    for (const auto& nf : per_node[i]) {
      const auto& src = g.nodes()[nf.neighbor];
      pg.inputs.push_back(src.lat);
      pg.inputs.push_back(src.lon);
      const auto masked = apply_mask(mask, nf.features);
      pg.inputs.insert(pg.inputs.end(), masked.begin(), masked.end());
    }
    pg.offsets.push_back(pg.inputs.size() / kMessageDim);
  }
  return pg;
}

PreparedGraph prepare(const FlowGraph& g, FeatureMask mask, const nn::FeatureScaler& scaler) {
  if (scaler.mean.size() != kMessageDim || scaler.stddev.size() != kMessageDim) {
    fail(ErrorKind::DimensionMismatch, "feature scaler must cover " + std::to_string(kMessageDim) + " columns");
  }
  PreparedGraph pg = raw_messages(g, mask);
  for (std::size_t m = 0; m * kMessageDim < pg.inputs.size(); ++m) {
    std::span<double> row(pg.inputs.data() + m * kMessageDim, kMessageDim);
    scaler.apply(row, row);
  }
  return pg;
}

void accumulate_moments(const FlowGraph& g, FeatureMask mask, nn::MomentAccumulator& acc) {
  const PreparedGraph pg = raw_messages(g, mask);
  for (std::size_t m = 0; m * kMessageDim < pg.inputs.size(); ++m) acc.add(pg.message(m));
}

nn::FeatureScaler fit_scaler(std::span<const LabeledGraph> corpus, FeatureMask mask) {
  nn::MomentAccumulator acc(kMessageDim);
  for (const auto& lg : corpus) accumulate_moments(lg.graph, mask, acc);
  return acc.finish(mask.masked_message_columns());
}

namespace {

/// Per-node forward state kept for the backward pass.
class NodeWorkspace {
 public:
  explicit NodeWorkspace(const nn::Network& net) : net_(net) {
    for (const auto& l : net.message_mlp) widths_.push_back(l.out_dim);
    stride_ = std::accumulate(widths_.begin(), widths_.end(), std::size_t{0});
    aggregate_.assign(net.readout.in_dim, 0.0);
  }

  /// Runs the message MLP over `count` messages starting at `first` and
  /// returns the sigmoid output. Activations are retained.
  double forward(const PreparedGraph& g, std::size_t first, std::size_t count) {
    const auto& k = simd::active();
    first_ = first;
    count_ = count;
    acts_.assign(count * stride_, 0.0);
    std::fill(aggregate_.begin(), aggregate_.end(), 0.0);
    for (std::size_t m = 0; m < count; ++m) {
      std::span<const double> x = g.message(first + m);
      double* base = acts_.data() + m * stride_;
      for (std::size_t l = 0; l < widths_.size(); ++l) {
        std::span<double> y(base, widths_[l]);
        k.gemv(net_.message_mlp[l].weights, net_.message_mlp[l].bias, x, y);
        for (double& v : y) v = nn::relu(v);
        x = y;
        base += widths_[l];
      }
      for (std::size_t j = 0; j < aggregate_.size(); ++j) aggregate_[j] += x[j];
    }
    double r = 0.0;
    k.gemv(net_.readout.weights, net_.readout.bias, aggregate_, std::span<double>(&r, 1));
    readout_ = r;
    pre_sigmoid_ = net_.head.weights[0] * r + net_.head.bias[0];
    score_ = nn::sigmoid(pre_sigmoid_);
    return score_;
  }

  /// Accumulates gradients for dLoss/dScore = `upstream`.
  void backward(const PreparedGraph& g, double upstream, nn::Network& grads) {
    const auto& k = simd::active();
    const double dz = upstream * score_ * (1.0 - score_);
    grads.head.weights[0] += dz * readout_;
    grads.head.bias[0] += dz;
    const double dr = dz * net_.head.weights[0];
    std::span<const double> dr_span(&dr, 1);
    // d aggregate = dr * readout weights; shared by every message.
    dagg_.assign(aggregate_.size(), 0.0);
    k.ger_acc(dr_span, aggregate_, grads.readout.weights);
    grads.readout.bias[0] += dr;
    k.gemv_t_acc(net_.readout.weights, dr_span, dagg_);

    const std::size_t layers = widths_.size();
    for (std::size_t m = 0; m < count_; ++m) {
      const double* base = acts_.data() + m * stride_;
      std::vector<const double*> outs(layers);
      std::size_t off = 0;
      for (std::size_t l = 0; l < layers; ++l) {
        outs[l] = base + off;
        off += widths_[l];
      }
      delta_.assign(dagg_.begin(), dagg_.end());
      for (std::size_t l = layers; l-- > 0;) {
        const std::size_t w = widths_[l];
        for (std::size_t j = 0; j < w; ++j) delta_[j] *= nn::relu_grad(outs[l][j]);
        std::span<const double> in = l == 0 ? g.message(first_ + m) : std::span<const double>(outs[l - 1], widths_[l - 1]);
        std::span<const double> d(delta_.data(), w);
        k.ger_acc(d, in, grads.message_mlp[l].weights);
        k.axpy(1.0, d, grads.message_mlp[l].bias);
        if (l > 0) {
          next_.assign(widths_[l - 1], 0.0);
          k.gemv_t_acc(net_.message_mlp[l].weights, d, next_);
          delta_.swap(next_);
        }
      }
    }
  }

  NodeActivationTrace trace() const {
    NodeActivationTrace t;
    const std::size_t latent_off = stride_ - widths_.back();
    for (std::size_t m = 0; m < count_; ++m) {
      const double* u = acts_.data() + m * stride_ + latent_off;
      t.latents.emplace_back(u, u + widths_.back());
    }
    t.aggregate = aggregate_;
    t.readout = readout_;
    t.pre_sigmoid = pre_sigmoid_;
    t.score = score_;
    return t;
  }

 private:
  const nn::Network& net_;
  std::vector<std::size_t> widths_;
  std::size_t stride_ = 0;
  std::size_t first_ = 0;
  std::size_t count_ = 0;
  std::vector<double> acts_;
  std::vector<double> aggregate_;
  std::vector<double> dagg_;
  std::vector<double> delta_;
  std::vector<double> next_;
  double readout_ = 0.0;
  double pre_sigmoid_ = 0.0;
  double score_ = 0.0;
};

}  // namespace

NodeActivationTrace forward_node(const nn::ModelParams& params, const FlowGraph& g, std::string_view node,
                                 FeatureMask mask) {
  params.net.validate(kMessageDim);
  const std::size_t idx = g.node_index(node);
  const PreparedGraph pg = prepare(g, mask, params.scaler);
  NodeWorkspace ws(params.net);
  ws.forward(pg, pg.offsets[idx], pg.message_count(idx));
  return ws.trace();
}

std::vector<double> forward_prepared(const nn::Network& net, const PreparedGraph& graph) {
  NodeWorkspace ws(net);
  std::vector<double> scores(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    scores[i] = ws.forward(graph, graph.offsets[i], graph.message_count(i));
  }
  return scores;
}

std::map<std::string, double> forward_graph(const nn::ModelParams& params, const FlowGraph& g, FeatureMask mask) {
  params.net.validate(kMessageDim);
  const PreparedGraph pg = prepare(g, mask, params.scaler);
  const auto scores = forward_prepared(params.net, pg);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < scores.size(); ++i) out.emplace(pg.node_ids[i], scores[i]);
  return out;
}

GradientResult backward_prepared(const nn::Network& net, const PreparedGraph& graph, std::span<const double> targets) {
  if (targets.size() != graph.node_count()) {
    fail(ErrorKind::LengthMismatch, "targets do not cover the graph's nodes");
  }
  GradientResult r;
  r.grads = net.zeros_like();
  const std::size_t n = graph.node_count();
  if (n == 0) return r;
  const double inv_n = 1.0 / static_cast<double>(n);
  NodeWorkspace ws(net);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = ws.forward(graph, graph.offsets[i], graph.message_count(i));
    const double diff = s - targets[i];
    r.loss += diff * diff;
    ws.backward(graph, 2.0 * diff * inv_n, r.grads);
  }
  r.loss *= inv_n;
  return r;
}

TrainingExample make_example(const LabeledGraph& lg, FeatureMask mask, const nn::FeatureScaler& scaler) {
  TrainingExample ex{prepare(lg.graph, mask, scaler), {}};
  ex.targets.reserve(ex.graph.node_count());
  for (const auto& id : ex.graph.node_ids) {
    auto it = lg.labels.find(id);
    if (it == lg.labels.end()) fail(ErrorKind::MissingTarget, "no label for node " + id);
    ex.targets.push_back(it->second);
  }
  return ex;
}

GradientResult backward_graph(const nn::ModelParams& params, const FlowGraph& g,
                              const std::map<std::string, double>& targets, FeatureMask mask) {
  params.net.validate(kMessageDim);
  const auto ex = make_example(LabeledGraph{g, targets}, mask, params.scaler);
  return backward_prepared(params.net, ex.graph, ex.targets);
}

std::vector<double> train_examples(nn::Network& net, std::span<const TrainingExample> corpus, nn::OptimizerState& opt,
                                   const TrainOptions& options) {
  if (corpus.empty()) fail(ErrorKind::EmptyCorpus, "training corpus is empty");
  std::vector<double> history;
  history.reserve(options.epochs);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t e = 0; e < options.epochs; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(options.seed, "shuffle", options.epoch_offset + e));
    rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t idx : order) {
      const auto& ex = corpus[idx];
      auto step = backward_prepared(net, ex.graph, ex.targets);
      total += step.loss;
      nn::optimizer_step(opt, net, step.grads);
    }
    history.push_back(total / static_cast<double>(corpus.size()));
  }
  return history;
}

TrainOutcome train(nn::ModelParams params, std::span<const LabeledGraph> corpus, nn::OptimizerState& opt,
                   FeatureMask mask, const TrainOptions& options) {
  if (corpus.empty()) fail(ErrorKind::EmptyCorpus, "training corpus is empty");
  params.net.validate(kMessageDim);
  params.scaler = fit_scaler(corpus, mask);
  params.mask_bits = mask.bits();
  std::vector<TrainingExample> examples;
  examples.reserve(corpus.size());
  for (const auto& lg : corpus) examples.push_back(make_example(lg, mask, params.scaler));
  TrainOutcome out;
  out.loss_history = train_examples(params.net, examples, opt, options);
  out.params = std::move(params);
  return out;
}

std::string predictions_to_csv(const std::map<std::string, double>& scores) {
  std::string out = "node,score\n";
  for (const auto& [node, s] : scores) out += node + ',' + format_double(s) + '\n';
  return out;
}

}  // namespace flee::gnn
