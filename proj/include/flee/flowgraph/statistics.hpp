#pragma once

#include <string>
#include <vector>

#include "flee/flowgraph/graph.hpp"

namespace flee {

/// Directed simple graph obtained by merging all commodity edges between an
/// ordered (source, dest) pair into one arc. Self-loops are dropped. Arc
/// weight is the sum of per-commodity values.
struct MergedDigraph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> out;  // ascending neighbor index
  std::vector<std::vector<std::size_t>> in;
  std::vector<std::vector<double>> out_weight;  // parallel to `out`
  std::size_t arc_count = 0;

  static MergedDigraph from(const FlowGraph& g);
};

struct StatisticsReport {
  std::size_t node_count = 0;
  std::size_t arc_count = 0;
  double average_degree = 0.0;
  double average_weighted_degree = 0.0;
  double average_degree_centrality = 0.0;
  double average_closeness_centrality = 0.0;
  double average_betweenness_centrality = 0.0;
  double average_node_connectivity = 0.0;
  std::size_t edge_connectivity = 0;
};

/// Throws EmptyGraph when g has no nodes.
StatisticsReport graph_statistics(const FlowGraph& g);

// Per-node building blocks, exposed for testing.
std::vector<double> closeness_centrality(const MergedDigraph& g);
std::vector<double> betweenness_centrality(const MergedDigraph& g);
/// Maximum number of internally vertex-disjoint s->t paths.
std::size_t local_node_connectivity(const MergedDigraph& g, std::size_t s, std::size_t t);
/// Maximum number of arc-disjoint s->t paths.
std::size_t local_edge_connectivity(const MergedDigraph& g, std::size_t s, std::size_t t);
std::size_t edge_connectivity(const MergedDigraph& g);

/// JSON object with the seven metrics and a `conventions` block.
std::string statistics_to_json(const StatisticsReport& report);

}  // namespace flee
