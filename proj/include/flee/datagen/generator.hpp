#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "flee/core/rng.hpp"
#include "flee/flowgraph/graph.hpp"
#include "flee/oracle/resilience.hpp"

namespace flee {

struct GeneratorConfig {
  double noise_ratio = 0.1;
  std::size_t count = 1;
  std::uint64_t seed = 0;

  /// Throws BadConfig.
  void validate() const;
};

/// Closed sampling ranges for value, tonnage and average miles.
struct AttributeRanges {
  double v_min = 0.0, v_max = 0.0;
  double t_min = 0.0, t_max = 0.0;
  double a_min = 0.0, a_max = 0.0;

  /// Extrema over the edges of g. Throws EmptyEdgeSet.
  static AttributeRanges of(const FlowGraph& g);
};

/// Counts of perturbations actually applied.
struct MutationCounts {
  std::size_t adds = 0;
  std::size_t removes = 0;
  std::size_t changes = 0;
};

/// New edge with a fresh (s, d, c) triple and attributes drawn uniformly from
/// `ranges`. Throws SaturatedTripleSpace.
FlowGraph op_add(const FlowGraph& g, const AttributeRanges& ranges, Rng& rng);

/// Drops one uniformly chosen edge. Throws EmptyEdgeSet.
FlowGraph op_remove(const FlowGraph& g, Rng& rng);

/// Redraws the attributes of one uniformly chosen edge. Throws EmptyEdgeSet.
FlowGraph op_change(const FlowGraph& g, const AttributeRanges& ranges, Rng& rng);

/// Number of REMOVE/CHANGE/ADD rounds for a graph with n edges.
std::size_t perturbation_rounds(std::size_t n_edges, double noise_ratio);

/// One perturbed graph for corpus index `index`; the stream seed is
/// derive_seed(cfg.seed, "datagen", index). Ranges are frozen from g0.
FlowGraph generate_one(const FlowGraph& g0, const GeneratorConfig& cfg, std::size_t index,
                       MutationCounts* counts = nullptr);

std::vector<FlowGraph> generate(const FlowGraph& g0, const GeneratorConfig& cfg,
                                std::vector<MutationCounts>* counts = nullptr);

inline constexpr std::string_view kGeneratorVersion = "flee-datagen/1";

/// Writes graph_<k>.csv, labels_<k>.csv and manifest.json under `dir`.
/// Labels come from the oracle on each whole generated graph.
void write_corpus(const std::filesystem::path& dir, const FlowGraph& g0, const std::vector<FlowGraph>& graphs,
                  const AdjacencyMap& adj, const OracleConfig& oracle, const GeneratorConfig& cfg,
                  const std::string& config_digest);

/// Reads a corpus directory written by write_corpus against a node set.
std::vector<LabeledGraph> read_corpus(const std::filesystem::path& dir, const std::vector<NodeRecord>& nodes);

}  // namespace flee
