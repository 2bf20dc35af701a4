#pragma once

#include <array>
#include <compare>
#include <map>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace flee {

inline constexpr int kCommodityCount = 8;
inline constexpr std::size_t kEdgeFeatureDim = 3 * kCommodityCount;  // (V,T,A) per SCTG class
inline constexpr std::size_t kMessageDim = 2 + kEdgeFeatureDim;       // lat, lon, edge features

enum class Region { West, Midwest, South, Northeast };

/// Canonical region order; used wherever per-region results are reduced.
inline constexpr std::array<Region, 4> kAllRegions{Region::West, Region::Midwest, Region::South,
                                                   Region::Northeast};

std::string_view to_string(Region region);
/// Throws UnknownRegion.
Region parse_region(std::string_view name);

/// SCTG food classes 01..08.
class CommodityCode {
 public:
  /// Throws SchemaViolation outside 1..8.
  explicit CommodityCode(int code);

  int value() const noexcept { return code_; }
  std::size_t slot() const noexcept { return static_cast<std::size_t>(code_ - 1); }

  auto operator<=>(const CommodityCode&) const = default;

 private:
  int code_;
};

struct NodeRecord {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  Region region = Region::West;
};

struct FlowEdge {
  std::string source;
  std::string dest;
  CommodityCode commodity{1};
  double value = 0.0;      // currency per ton
  double tonnage = 0.0;    // tons
  double avg_miles = 0.0;  // miles
};

/// Directed multigraph of states with at most one edge per
/// (source, dest, commodity). Nodes are kept sorted by id; edges keep the
/// order they were supplied in. Immutable once built.
class FlowGraph {
 public:
  FlowGraph() = default;

  /// Validates every invariant; throws SchemaViolation, UnknownNode or DuplicateFlow.
  FlowGraph(std::vector<NodeRecord> nodes, std::vector<FlowEdge> edges);

  const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
  const std::vector<FlowEdge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t n_edges() const noexcept { return edges_.size(); }

  std::optional<std::size_t> find_node(std::string_view id) const;
  /// Throws UnknownNode.
  std::size_t node_index(std::string_view id) const;

  bool has_flow(std::string_view source, std::string_view dest, CommodityCode c) const;

  /// Same node set, new edge list (validated).
  FlowGraph with_edges(std::vector<FlowEdge> edges) const;

  /// Edge indices (into edges()) ordered by (source, dest, commodity).
  std::vector<std::size_t> canonical_edge_order() const;

 private:
  std::uint64_t triple_key(std::size_t s, std::size_t d, CommodityCode c) const noexcept {
    return (static_cast<std::uint64_t>(s) * nodes_.size() + d) * kCommodityCount + c.slot();
  }

  std::vector<NodeRecord> nodes_;
  std::vector<FlowEdge> edges_;
  std::unordered_set<std::uint64_t> triples_;
};

/// A graph with per-node target scores (oracle labels of the whole graph,
/// possibly restricted to a sub-graph's nodes).
struct LabeledGraph {
  FlowGraph graph;
  std::map<std::string, double> labels;
};

/// Geographic adjacency between states; symmetric, reflexive.
class AdjacencyMap {
 public:
  AdjacencyMap() = default;
  void add(std::string_view a, std::string_view b);
  bool adjacent(std::string_view a, std::string_view b) const;
  std::size_t pair_count() const noexcept { return pairs_.size(); }

 private:
  std::unordered_set<std::string> pairs_;  // "min|max"
};

}  // namespace flee
