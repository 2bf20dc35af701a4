#include "flee/flowgraph/silo.hpp"

#include "flee/core/error.hpp"

namespace flee {

SiloAssignment SiloAssignment::from_graph(const FlowGraph& g) {
  std::map<std::string, Region> regions;
  for (const auto& n : g.nodes()) regions.emplace(n.id, n.region);
  return SiloAssignment(std::move(regions));
}

SiloAssignment SiloAssignment::single_region(const FlowGraph& g, Region region) {
  std::map<std::string, Region> regions;
  for (const auto& n : g.nodes()) regions.emplace(n.id, region);
  return SiloAssignment(std::move(regions));
}

Region SiloAssignment::region_of(std::string_view node) const {
  auto it = regions_.find(std::string(node));
  if (it == regions_.end()) fail(ErrorKind::NodeWithoutRegion, std::string(node));
  return it->second;
}

std::size_t SiloAssignment::count(Region region) const {
  std::size_t n = 0;
  for (const auto& [id, r] : regions_) n += (r == region);
  return n;
}

FlowGraph extract_silo(const FlowGraph& g, const SiloAssignment& assignment, Region region) {
  std::vector<NodeRecord> nodes;
  std::vector<bool> keep(g.node_count(), false);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.nodes()[i];
    if (assignment.region_of(n.id) == region) {
      keep[i] = true;
      nodes.push_back(n);
    }
  }
  std::vector<FlowEdge> edges;
  for (const auto& e : g.edges()) {
    if (keep[g.node_index(e.source)] && keep[g.node_index(e.dest)]) edges.push_back(e);
  }
  return FlowGraph(std::move(nodes), std::move(edges));
}

FlowGraph drop_cross_silo_edges(const FlowGraph& g, const SiloAssignment& assignment) {
  std::vector<FlowEdge> edges;
  for (const auto& e : g.edges()) {
    if (assignment.region_of(e.source) == assignment.region_of(e.dest)) edges.push_back(e);
  }
  for (const auto& n : g.nodes()) (void)assignment.region_of(n.id);
  return g.with_edges(std::move(edges));
}

}  // namespace flee
