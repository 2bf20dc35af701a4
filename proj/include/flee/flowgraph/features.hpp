#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "flee/flowgraph/graph.hpp"

namespace flee {

/// (V_1,T_1,A_1, ..., V_8,T_8,A_8); absent commodities are zero.
using EdgeFeatureVector = std::array<double, kEdgeFeatureDim>;

struct NeighborFeatures {
  std::size_t neighbor = 0;  // node index into g.nodes()
  EdgeFeatureVector features{};
};

/// One entry per distinct source shipping into `dest` (self-loops included),
/// ascending by source id. Throws UnknownNode.
std::vector<NeighborFeatures> build_edge_features(const FlowGraph& g, std::string_view dest);

/// build_edge_features for every node at once, indexed by destination node index.
std::vector<std::vector<NeighborFeatures>> build_all_edge_features(const FlowGraph& g);

}  // namespace flee
