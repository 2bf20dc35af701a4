#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flee/flowgraph/graph.hpp"

namespace flee {

/// Partition of the eight SCTG classes into aggregated commodity groups.
struct CommodityGrouping {
  std::vector<std::vector<int>> groups;

  /// Every SCTG class in its own group.
  static CommodityGrouping singletons();

  /// Throws BadConfig unless the groups partition {1..8}.
  void validate() const;
  /// Group index of each commodity slot (0..7).
  std::array<std::size_t, kCommodityCount> slot_to_group() const;
};

enum class FlowDirection { Import, Export };

struct OracleConfig {
  /// Reference distance for exp(-miles / ref). Unset means "mean avg_miles of
  /// the graph the config is resolved against".
  std::optional<double> distance_ref;
  double nonadjacent_discount = 0.8;
  FlowDirection direction = FlowDirection::Import;
  CommodityGrouping grouping = CommodityGrouping::singletons();

  /// Throws BadConfig.
  void validate() const;
  /// Copy with distance_ref filled from `g` when unset.
  OracleConfig resolved(const FlowGraph& g) const;
};

/// value * tonnage * exp(-avg_miles / ref) * (1 or nonadjacent_discount).
/// Requires a resolved config.
double discounted_flow_value(const FlowEdge& edge, const AdjacencyMap& adj, const OracleConfig& cfg);

/// 1 - H(p) / ln(category_count) over normalized shares. Throws AllZeroShares.
double commodity_dependence(std::span<const double> shares, std::size_t category_count);

/// 1 - H(q) / ln(possible_partners) over partner shares of one group, clamped
/// to [0, 1]; 1 when possible_partners <= 1. Throws NoFlowsInGroup.
double supplier_concentration(std::span<const double> partner_values, std::size_t possible_partners);

struct OracleBreakdown {
  std::string node;
  double score = 0.0;
  double commodity_dependence = 0.0;
  std::vector<double> group_values;  // concentration-weighted, per group index
  double total_value = 0.0;
  std::map<std::pair<std::string, int>, double> flow_values;  // (partner, sctg) -> discounted value
  bool degenerate = false;
};

/// Per-node breakdown in canonical (ascending id) node order.
std::vector<OracleBreakdown> resilience(const FlowGraph& g, const AdjacencyMap& adj, const OracleConfig& cfg);

/// node -> score convenience view.
std::map<std::string, double> resilience_scores(const FlowGraph& g, const AdjacencyMap& adj, const OracleConfig& cfg);

/// `node,score,dependence,total_value,degenerate`
std::string resilience_to_csv(const std::vector<OracleBreakdown>& rows);

/// Reads the score column of a resilience or predictions CSV.
std::map<std::string, double> read_scores_csv(const std::string& path);

}  // namespace flee
