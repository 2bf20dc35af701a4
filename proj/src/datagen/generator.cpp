#include "flee/datagen/generator.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"
#include "flee/flowgraph/ingest.hpp"

namespace flee {

void GeneratorConfig::validate() const {
  if (!(noise_ratio >= 0.0 && noise_ratio <= 1.0)) fail(ErrorKind::BadConfig, "noise ratio must lie in [0, 1]");
  if (count < 1) fail(ErrorKind::BadConfig, "count must be >= 1");
}

AttributeRanges AttributeRanges::of(const FlowGraph& g) {
  if (g.n_edges() == 0) fail(ErrorKind::EmptyEdgeSet, "attribute ranges of an edgeless graph");
  const auto& first = g.edges().front();
  AttributeRanges r{first.value, first.value, first.tonnage, first.tonnage, first.avg_miles, first.avg_miles};
  for (const auto& e : g.edges()) {
    r.v_min = std::min(r.v_min, e.value);
    r.v_max = std::max(r.v_max, e.value);
    r.t_min = std::min(r.t_min, e.tonnage);
    r.t_max = std::max(r.t_max, e.tonnage);
    r.a_min = std::min(r.a_min, e.avg_miles);
    r.a_max = std::max(r.a_max, e.avg_miles);
  }
  return r;
}

namespace {

void resample_attributes(FlowEdge& e, const AttributeRanges& r, Rng& rng) {
  e.value = rng.uniform(r.v_min, r.v_max);
  e.tonnage = rng.uniform(r.t_min, r.t_max);
  e.avg_miles = rng.uniform(r.a_min, r.a_max);
}

}  // namespace

FlowGraph op_add(const FlowGraph& g, const AttributeRanges& ranges, Rng& rng) {
  const std::size_t n = g.node_count();
  if (n == 0 || g.n_edges() >= n * n * kCommodityCount) {
    fail(ErrorKind::SaturatedTripleSpace, "every (source, dest, commodity) triple is occupied");
  }
  FlowEdge e;
  do {
    e.source = g.nodes()[rng.below(n)].id;
    e.dest = g.nodes()[rng.below(n)].id;
    e.commodity = CommodityCode(static_cast<int>(rng.below(kCommodityCount)) + 1);
  } while (g.has_flow(e.source, e.dest, e.commodity));
  resample_attributes(e, ranges, rng);
  auto edges = g.edges();
  edges.push_back(std::move(e));
  return g.with_edges(std::move(edges));
}

FlowGraph op_remove(const FlowGraph& g, Rng& rng) {
  if (g.n_edges() == 0) fail(ErrorKind::EmptyEdgeSet, "remove from an edgeless graph");
  auto edges = g.edges();
  edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(rng.below(edges.size())));
  return g.with_edges(std::move(edges));
}

FlowGraph op_change(const FlowGraph& g, const AttributeRanges& ranges, Rng& rng) {
  if (g.n_edges() == 0) fail(ErrorKind::EmptyEdgeSet, "change on an edgeless graph");
  auto edges = g.edges();
  resample_attributes(edges[rng.below(edges.size())], ranges, rng);
  return g.with_edges(std::move(edges));
}

std::size_t perturbation_rounds(std::size_t n_edges, double noise_ratio) {
  // Decimal ratios are inexact in binary (0.7 * 30 = 20.999...), so allow a
  // relative slack before flooring.
  const double x = noise_ratio * static_cast<double>(n_edges) / 3.0;
  return static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

FlowGraph generate_one(const FlowGraph& g0, const GeneratorConfig& cfg, std::size_t index, MutationCounts* counts) {
  cfg.validate();
  const std::size_t rounds = perturbation_rounds(g0.n_edges(), cfg.noise_ratio);
  if (rounds == 0) return g0;
  const AttributeRanges ranges = AttributeRanges::of(g0);
  Rng rng(derive_seed(cfg.seed, "datagen", index));
  FlowGraph g = g0;
  for (std::size_t i = 0; i < rounds; ++i) {
    g = op_remove(g, rng);
    g = op_change(g, ranges, rng);
    g = op_add(g, ranges, rng);
    if (counts) {
      ++counts->removes;
      ++counts->changes;
      ++counts->adds;
    }
  }
  return g;
}

std::vector<FlowGraph> generate(const FlowGraph& g0, const GeneratorConfig& cfg, std::vector<MutationCounts>* counts) {
  cfg.validate();
  std::vector<FlowGraph> out;
  out.reserve(cfg.count);
  if (counts) counts->assign(cfg.count, MutationCounts{});
  for (std::size_t k = 0; k < cfg.count; ++k) {
    out.push_back(generate_one(g0, cfg, k, counts ? &(*counts)[k] : nullptr));
  }
  return out;
}

void write_corpus(const std::filesystem::path& dir, const FlowGraph& g0, const std::vector<FlowGraph>& graphs,
                  const AdjacencyMap& adj, const OracleConfig& oracle, const GeneratorConfig& cfg,
                  const std::string& config_digest) {
  std::filesystem::create_directories(dir);
  const OracleConfig resolved = oracle.resolved(g0);
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const auto idx = std::to_string(k);
    write_file_atomic(dir / ("graph_" + idx + ".csv"), flows_to_csv(graphs[k]));
    write_file_atomic(dir / ("labels_" + idx + ".csv"), resilience_to_csv(resilience(graphs[k], adj, resolved)));
  }
  nlohmann::ordered_json m;
  m["generator_version"] = kGeneratorVersion;
  m["seed"] = cfg.seed;
  m["noise_ratio"] = cfg.noise_ratio;
  m["count"] = graphs.size();
  m["source_edges"] = g0.n_edges();
  m["perturbation_rounds"] = perturbation_rounds(g0.n_edges(), cfg.noise_ratio);
  m["operation_order"] = {"REMOVE", "CHANGE", "ADD"};
  m["attribute_ranges"] = "frozen from the source graph";
  m["source_graph_digest"] = hex32(crc32(nodes_to_csv(g0) + flows_to_csv(g0)));
  m["label_distance_ref"] = *resolved.distance_ref;
  m["config_digest"] = config_digest;
  write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<LabeledGraph> read_corpus(const std::filesystem::path& dir, const std::vector<NodeRecord>& nodes) {
  const auto manifest_path = dir / "manifest.json";
  const auto manifest = nlohmann::json::parse(read_text_file(manifest_path));
  const std::size_t count = manifest.at("count").get<std::size_t>();
  std::vector<LabeledGraph> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto idx = std::to_string(k);
    LabeledGraph lg{flows_from_csv_file(dir / ("graph_" + idx + ".csv"), nodes),
                    read_scores_csv((dir / ("labels_" + idx + ".csv")).string())};
    out.push_back(std::move(lg));
  }
  return out;
}

}  // namespace flee
