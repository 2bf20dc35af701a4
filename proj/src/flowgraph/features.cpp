#include "flee/flowgraph/features.hpp"

#include <map>

namespace flee {

std::vector<std::vector<NeighborFeatures>> build_all_edge_features(const FlowGraph& g) {
  // Node indices follow ascending id, so a map keyed by source index yields
  // the canonical neighbor order.
  std::vector<std::map<std::size_t, EdgeFeatureVector>> acc(g.node_count());
  for (const auto& e : g.edges()) {
    const std::size_t s = g.node_index(e.source);
    const std::size_t d = g.node_index(e.dest);
    auto [it, inserted] = acc[d].try_emplace(s);
    if (inserted) it->second.fill(0.0);
    const std::size_t base = 3 * e.commodity.slot();
    it->second[base + 0] = e.value;
    it->second[base + 1] = e.tonnage;
    it->second[base + 2] = e.avg_miles;
  }
  std::vector<std::vector<NeighborFeatures>> out(g.node_count());
  for (std::size_t d = 0; d < acc.size(); ++d) {
    out[d].reserve(acc[d].size());
    for (const auto& [s, feats] : acc[d]) out[d].push_back(NeighborFeatures{s, feats});
  }
  return out;
}

std::vector<NeighborFeatures> build_edge_features(const FlowGraph& g, std::string_view dest) {
  (void)g.node_index(dest);  // validates
  std::map<std::size_t, EdgeFeatureVector> acc;
  for (const auto& e : g.edges()) {
    if (e.dest != dest) continue;
    auto [it, inserted] = acc.try_emplace(g.node_index(e.source));
    if (inserted) it->second.fill(0.0);
    const std::size_t base = 3 * e.commodity.slot();
    it->second[base + 0] = e.value;
    it->second[base + 1] = e.tonnage;
    it->second[base + 2] = e.avg_miles;
  }
  std::vector<NeighborFeatures> out;
  out.reserve(acc.size());
  for (const auto& [s, feats] : acc) out.push_back(NeighborFeatures{s, feats});
  return out;
}

}  // namespace flee
