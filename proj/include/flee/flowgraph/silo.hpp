#pragma once

#include <map>
#include <string>

#include "flee/flowgraph/graph.hpp"

namespace flee {

/// Region of every node; the federated clients are the regions.
class SiloAssignment {
 public:
  SiloAssignment() = default;
  explicit SiloAssignment(std::map<std::string, Region> regions) : regions_(std::move(regions)) {}

  /// Uses each node's own region field.
  static SiloAssignment from_graph(const FlowGraph& g);
  /// Puts every node of g into `region`.
  static SiloAssignment single_region(const FlowGraph& g, Region region);

  /// Throws NodeWithoutRegion.
  Region region_of(std::string_view node) const;
  bool contains(std::string_view node) const { return regions_.find(std::string(node)) != regions_.end(); }
  std::size_t count(Region region) const;
  const std::map<std::string, Region>& regions() const noexcept { return regions_; }

 private:
  std::map<std::string, Region> regions_;
};

/// Induced sub-graph on the region's nodes; cross-region edges are dropped.
/// Throws NodeWithoutRegion if a node of g is unassigned.
FlowGraph extract_silo(const FlowGraph& g, const SiloAssignment& assignment, Region region);

/// Whole graph minus every edge whose endpoints lie in different regions.
FlowGraph drop_cross_silo_edges(const FlowGraph& g, const SiloAssignment& assignment);

}  // namespace flee
