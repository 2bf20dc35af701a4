#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <cstring>

#include "flee/core/io.hpp"
#include "flee/fedsim/federation.hpp"
#include "flee/neural/checkpoint.hpp"
#include "flee/flowgraph/ingest.hpp"
#include "flee/flowgraph/statistics.hpp"
#include "support.hpp"

using namespace flee;
using namespace flee::fed;
using test::kind_of;

namespace {

nn::ModelDims small_dims() {
  nn::ModelDims d;
  d.message = {26, 8, 4};
  return d;
}

nn::Network scalar_network(double v) {
  nn::Network n;
  n.message_mlp.emplace_back(1, 1);
  n.readout = nn::DenseLayer(1, 1);
  n.head = nn::DenseLayer(1, 1);
  n.message_mlp[0].weights[0] = v;
  return n;
}

nn::ModelParams scalar_params(double v) {
  nn::ModelParams p;
  p.net = scalar_network(v);
  p.scaler = nn::FeatureScaler::identity(kMessageDim);
  return p;
}

// Labeled random graphs over a shared 8-node set spread over four regions.
std::vector<LabeledGraph> corpus(std::size_t count, std::uint64_t seed, std::size_t regions = 4) {
  Rng rng(seed);
  std::vector<LabeledGraph> out;
  for (std::size_t i = 0; i < count; ++i) {
    test::RandomGraphOptions o;
    o.nodes = 8;
    o.edges = 30;
    o.regions = regions;
    Rng graph_rng(seed * 1000 + i);
    LabeledGraph lg{test::random_graph(graph_rng, o), {}};
    for (const auto& n : lg.graph.nodes()) lg.labels[n.id] = rng.uniform(0.1, 0.9);
    out.push_back(std::move(lg));
  }
  return out;
}

bool same_bits(const nn::Network& a, const nn::Network& b) {
  const auto ta = a.tensors(), tb = b.tensors();
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (std::memcmp(ta[i].data(), tb[i].data(), ta[i].size_bytes()) != 0) return false;
  return true;
}

double max_abs_diff(const nn::Network& a, const nn::Network& b) {
  const auto ta = a.tensors(), tb = b.tensors();
  double m = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i)
    for (std::size_t j = 0; j < ta[i].size(); ++j) m = std::max(m, std::abs(ta[i][j] - tb[i][j]));
  return m;
}

FederationOptions options(std::size_t epochs, std::size_t sync, std::uint64_t seed) {
  FederationOptions o;
  o.config.total_epochs = epochs;
  o.config.sync_every = sync;
  o.config.seed = seed;
  o.learning_rate = 1e-2;
  return o;
}

}  // namespace

TEST_CASE("aggregate examples") {
  const auto global = scalar_params(0.0);
  const std::vector<nn::Network> deltas{scalar_network(1.0), scalar_network(3.0)};
  const std::vector<double> w{0.25, 0.75};
  CHECK(aggregate(global, deltas, w).net.message_mlp[0].weights[0] == 2.5);

  const std::vector<nn::Network> four{scalar_network(1.0), scalar_network(5.0), scalar_network(7.0),
                                      scalar_network(9.0)};
  const std::vector<double> first{1, 0, 0, 0};
  CHECK(aggregate(scalar_params(2.0), four, first).net.message_mlp[0].weights[0] == 3.0);

  // Identical locals: every delta equals local - global, and the weights sum to 1.
  const std::vector<nn::Network> same(4, scalar_network(0.5));
  const std::vector<double> quarter(4, 0.25);
  CHECK(aggregate(scalar_params(1.0), same, quarter).net.message_mlp[0].weights[0] == 1.5);

  const auto p = nn::ModelParams::init(small_dims(), 1);
  const std::vector<nn::Network> zeros(3, p.net.zeros_like());
  const std::vector<double> third(3, 1.0 / 3);
  CHECK(same_bits(aggregate(p, zeros, third).net, p.net));

  const std::vector<nn::Network> wrong{nn::ModelParams::init(nn::ModelDims{}, 1).net};
  const std::vector<double> one{1.0};
  CHECK(kind_of([&] { aggregate(p, wrong, one); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([&] { aggregate(p, zeros, one); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("aggregation weights") {
  auto silos = partition_corpus(corpus(3, 1), SiloAssignment::from_graph(corpus(1, 1)[0].graph));
  const auto w = aggregation_weights(WeightPolicy::BySampleCount, silos);
  double total = 0.0, samples = 0.0;
  for (const auto& s : silos) samples += static_cast<double>(s.sample_count());
  for (std::size_t k = 0; k < silos.size(); ++k) {
    total += w[k];
    CHECK(w[k] == doctest::Approx(silos[k].sample_count() / samples));
  }
  CHECK(total == doctest::Approx(1.0));
  for (double x : aggregation_weights(WeightPolicy::Uniform, silos)) CHECK(x == 0.25);

  silos[2].graphs.clear();
  const auto with_empty = aggregation_weights(WeightPolicy::ByNodeCount, silos);
  CHECK(with_empty[2] == 0.0);
  CHECK(with_empty[0] + with_empty[1] + with_empty[3] == doctest::Approx(1.0));
  for (auto& s : silos) s.graphs.clear();
  CHECK(kind_of([&] { aggregation_weights(WeightPolicy::Uniform, silos); }) == ErrorKind::EmptyCorpus);
  CHECK(parse_weight_policy("by_node_count") == WeightPolicy::ByNodeCount);
  CHECK(kind_of([] { parse_weight_policy("median"); }) == ErrorKind::BadConfig);
}

TEST_CASE("partition: one region is the identity") {
  const auto c = corpus(4, 2);
  const auto silos = partition_corpus(c, SiloAssignment::single_region(c[0].graph, Region::South));
  REQUIRE(silos.size() == 4);
  for (const auto& s : silos) CHECK(s.empty() == (s.region != Region::South));
  const auto& south = silos[2];
  REQUIRE(south.graphs.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(south.graphs[i].labels == c[i].labels);
    CHECK(south.graphs[i].graph.n_edges() == c[i].graph.n_edges());
  }
}

TEST_CASE("partition: silo edges are the whole edges minus cross-silo edges") {
  const auto c = corpus(5, 3);
  const auto assignment = SiloAssignment::from_graph(c[0].graph);
  const auto silos = partition_corpus(c, assignment);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::multiset<std::tuple<std::string, std::string, int>> whole, united;
    for (const auto& e : c[i].graph.edges()) {
      if (assignment.region_of(e.source) == assignment.region_of(e.dest))
        whole.insert({e.source, e.dest, e.commodity.value()});
    }
    for (const auto& s : silos) {
      for (const auto& e : s.graphs[i].graph.edges()) united.insert({e.source, e.dest, e.commodity.value()});
      // Labels are the whole-graph labels of the silo's nodes.
      for (const auto& [id, v] : s.graphs[i].labels) CHECK(v == c[i].labels.at(id));
    }
    CHECK(whole == united);
  }
  CHECK(kind_of([&] { partition_corpus(c, SiloAssignment({{"AA", Region::West}})); }) ==
        ErrorKind::NodeWithoutRegion);
}

TEST_CASE("partition of the sample graph: West silo") {
  const auto g = ingest_graph(test::kSampleDir + "/nodes.csv", test::kSampleDir + "/flows.csv");
  std::vector<LabeledGraph> labeled{{g, {}}};
  for (const auto& n : g.nodes()) labeled[0].labels[n.id] = 0.5;
  const auto assignment = SiloAssignment::from_graph(g);
  const auto silos = partition_corpus(labeled, assignment);
  const auto& west = silos[0];
  CHECK(west.region == Region::West);
  CHECK(west.node_count == assignment.count(Region::West));
  const auto direct = extract_silo(g, assignment, Region::West);
  CHECK(west.graphs[0].graph.n_edges() == direct.n_edges());
  CHECK(graph_statistics(west.graphs[0].graph).average_degree == graph_statistics(direct).average_degree);
  for (const auto& n : west.graphs[0].graph.nodes()) CHECK(n.region == Region::West);
}

TEST_CASE("local training never sees a cross-silo edge") {
  const auto c = corpus(6, 4);
  const auto assignment = SiloAssignment::from_graph(c[0].graph);
  const auto silos = partition_corpus(c, assignment);
  auto o = options(4, 2, 4);
  std::size_t graphs_seen = 0, cross = 0;
  o.observer = [&](Region r, const FlowGraph& g) {
    ++graphs_seen;
    for (const auto& e : g.edges()) {
      if (assignment.region_of(e.source) != r || assignment.region_of(e.dest) != r) ++cross;
    }
  };
  run_federation(nn::ModelParams::init(small_dims(), 4), silos, o);
  CHECK(graphs_seen == 2 * 4 * c.size());
  CHECK(cross == 0);
}

TEST_CASE("local_train: zero learning rate gives a zero delta; delta is local - global") {
  const auto c = corpus(3, 5);
  const auto silos = partition_corpus(c, SiloAssignment::from_graph(c[0].graph));
  auto global = nn::ModelParams::init(small_dims(), 5);
  global.scaler = federated_scaler(silos, gnn::FeatureMask::all());
  auto frozen = nn::OptimizerState::make(nn::OptimizerKind::Adam, 0.0, global.net);
  const auto r = local_train(global, silos[1], frozen, gnn::FeatureMask::all(), {3, 5});
  for (auto t : r.delta.tensors())
    for (double v : t) CHECK(v == 0.0);

  auto opt = nn::OptimizerState::make(nn::OptimizerKind::Adam, 1e-2, global.net);
  const auto moved = local_train(global, silos[1], opt, gnn::FeatureMask::all(), {3, 5});
  CHECK(moved.losses.size() == 3);
  const auto tl = moved.local.net.tensors();
  const auto tg = global.net.tensors();
  const auto td = moved.delta.tensors();
  bool any = false;
  for (std::size_t i = 0; i < td.size(); ++i) {
    for (std::size_t j = 0; j < td[i].size(); ++j) {
      CHECK(td[i][j] == tl[i][j] - tg[i][j]);
      any = any || td[i][j] != 0.0;
    }
  }
  CHECK(any);

  SiloCorpus empty;
  auto opt2 = nn::OptimizerState::make(nn::OptimizerKind::Adam, 1e-2, global.net);
  const auto e = local_train(global, empty, opt2, gnn::FeatureMask::all(), {3, 5});
  CHECK(e.empty_silo);
  CHECK(same_bits(e.local.net, global.net));
}

TEST_CASE("degenerate federation reproduces centralized training") {
  const auto c = corpus(5, 6);
  const auto init = nn::ModelParams::init(small_dims(), 6);
  const auto silos = partition_corpus(c, SiloAssignment::single_region(c[0].graph, Region::Midwest));
  auto fo = options(6, 1, 6);
  const auto fed = run_federation(init, silos, fo);
  CHECK(fed.rounds.size() == 6);

  auto opt = nn::OptimizerState::make(nn::OptimizerKind::Adam, 1e-2, init.net);
  const auto central = gnn::train(init, c, opt, gnn::FeatureMask::all(), {6, 6});
  CHECK(max_abs_diff(fed.global.net, central.params.net) <= 1e-12);
  for (std::size_t e = 0; e < 6; ++e)
    CHECK(fed.rounds[e].silos[1].losses[0] == doctest::Approx(central.loss_history[e]).epsilon(1e-12));

  // One epoch, one round: a single centralized epoch.
  auto one = options(1, 1, 6);
  const auto fed1 = run_federation(init, silos, one);
  auto opt1 = nn::OptimizerState::make(nn::OptimizerKind::Adam, 1e-2, init.net);
  const auto central1 = gnn::train(init, c, opt1, gnn::FeatureMask::all(), {1, 6});
  CHECK(max_abs_diff(fed1.global.net, central1.params.net) <= 1e-12);
}

TEST_CASE("round count and config validation") {
  const auto c = corpus(2, 7);
  const auto silos = partition_corpus(c, SiloAssignment::from_graph(c[0].graph));
  const auto r = run_federation(nn::ModelParams::init(small_dims(), 7), silos, options(100, 10, 7));
  CHECK(r.rounds.size() == 10);
  for (std::size_t i = 0; i < r.rounds.size(); ++i) {
    CHECK(r.rounds[i].round == i);
    CHECK(r.rounds[i].silos.size() == 4);
    CHECK(r.rounds[i].digest.size() == 8);
  }
  CHECK(r.rounds.back().digest == hex32(nn::parameter_digest(r.global)));
  CHECK(kind_of([&] { run_federation(nn::ModelParams::init(small_dims(), 7), silos, options(100, 7, 7)); }) ==
        ErrorKind::BadConfig);
  CHECK(kind_of([&] { run_federation(nn::ModelParams::init(small_dims(), 7), silos, options(10, 0, 7)); }) ==
        ErrorKind::BadConfig);
}

TEST_CASE("silo processing order does not change the result") {
  const auto c = corpus(4, 8);
  const auto silos = partition_corpus(c, SiloAssignment::from_graph(c[0].graph));
  const auto init = nn::ModelParams::init(small_dims(), 8);
  auto a = options(6, 2, 8);
  auto b = a;
  b.silo_schedule = {3, 1, 0, 2};
  const auto ra = run_federation(init, silos, a);
  const auto rb = run_federation(init, silos, b);
  CHECK(same_bits(ra.global.net, rb.global.net));
  CHECK(round_logs_to_jsonl(ra.rounds) == round_logs_to_jsonl(rb.rounds));
  b.silo_schedule = {0, 1};
  CHECK(kind_of([&] { run_federation(init, silos, b); }) == ErrorKind::BadConfig);
}

TEST_CASE("an empty silo gets weight zero and is flagged") {
  // Regions assigned round-robin over three regions leave Northeast empty.
  const auto c = corpus(3, 9, 3);
  const auto silos = partition_corpus(c, SiloAssignment::from_graph(c[0].graph));
  CHECK(silos[3].empty());
  const auto r = run_federation(nn::ModelParams::init(small_dims(), 9), silos, options(2, 1, 9));
  for (const auto& round : r.rounds) {
    CHECK(round.silos[3].empty);
    CHECK(round.silos[3].weight == 0.0);
    CHECK(round.silos[3].losses.empty());
  }
  for (auto t : r.global.net.tensors())
    for (double v : t) CHECK(std::isfinite(v));
}

TEST_CASE("federation logs are reproducible") {
  const auto c = corpus(3, 10);
  const auto silos = partition_corpus(c, SiloAssignment::from_graph(c[0].graph));
  const auto init = nn::ModelParams::init(small_dims(), 10);
  const auto a = round_logs_to_jsonl(run_federation(init, silos, options(4, 2, 10)).rounds);
  const auto b = round_logs_to_jsonl(run_federation(init, silos, options(4, 2, 10)).rounds);
  CHECK(a == b);
  CHECK(std::count(a.begin(), a.end(), '\n') == 2);
  CHECK(a.find("wall") == std::string::npos);
  CHECK(a != round_logs_to_jsonl(run_federation(init, silos, options(4, 2, 11)).rounds));
}

TEST_CASE("predict_on_silos scores each node from its own silo") {
  const auto c = corpus(1, 11);
  const auto& g = c[0].graph;
  const auto assignment = SiloAssignment::from_graph(g);
  auto p = nn::ModelParams::init(small_dims(), 11);
  const auto scores = predict_on_silos(p, g, assignment, gnn::FeatureMask::all());
  CHECK(scores.size() == g.node_count());
  for (Region r : kAllRegions) {
    const auto silo = extract_silo(g, assignment, r);
    for (const auto& [id, s] : gnn::forward_graph(p, silo, gnn::FeatureMask::all())) CHECK(scores.at(id) == s);
  }
}
