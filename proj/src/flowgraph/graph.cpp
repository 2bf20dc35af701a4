#include "flee/flowgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flee/core/error.hpp"

namespace flee {

std::string_view to_string(Region region) {
  switch (region) {
    case Region::West: return "West";
    case Region::Midwest: return "Midwest";
    case Region::South: return "South";
    case Region::Northeast: return "Northeast";
  }
  return "?";
}

Region parse_region(std::string_view name) {
  for (Region r : kAllRegions) {
    if (to_string(r) == name) return r;
  }
  fail(ErrorKind::UnknownRegion, std::string(name));
}

CommodityCode::CommodityCode(int code) : code_(code) {
  if (code < 1 || code > kCommodityCount) {
    fail(ErrorKind::SchemaViolation, "commodity code " + std::to_string(code) + " outside 01..08");
  }
}

FlowGraph::FlowGraph(std::vector<NodeRecord> nodes, std::vector<FlowEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(), [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.id.empty()) fail(ErrorKind::SchemaViolation, "empty node id");
    if (i > 0 && nodes_[i - 1].id == n.id) fail(ErrorKind::SchemaViolation, "duplicate node id " + n.id);
    if (!(n.lat >= -90.0 && n.lat <= 90.0)) fail(ErrorKind::SchemaViolation, "latitude out of range for " + n.id);
    if (!(n.lon >= -180.0 && n.lon <= 180.0)) fail(ErrorKind::SchemaViolation, "longitude out of range for " + n.id);
  }
  triples_.reserve(edges_.size() * 2);
  for (const auto& e : edges_) {
    const std::size_t s = node_index(e.source);
    const std::size_t d = node_index(e.dest);
    if (!(e.value >= 0.0) || !(e.tonnage >= 0.0) || !(e.avg_miles >= 0.0) || !std::isfinite(e.value) ||
        !std::isfinite(e.tonnage) || !std::isfinite(e.avg_miles)) {
      fail(ErrorKind::SchemaViolation, "negative or non-finite attribute on " + e.source + "->" + e.dest);
    }
    if (!triples_.insert(triple_key(s, d, e.commodity)).second) {
      fail(ErrorKind::DuplicateFlow,
           "(" + e.source + "," + e.dest + "," + std::to_string(e.commodity.value()) + ")");
    }
  }
}

std::optional<std::size_t> FlowGraph::find_node(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const NodeRecord& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t FlowGraph::node_index(std::string_view id) const {
  auto idx = find_node(id);
  if (!idx) fail(ErrorKind::UnknownNode, std::string(id));
  return *idx;
}

bool FlowGraph::has_flow(std::string_view source, std::string_view dest, CommodityCode c) const {
  auto s = find_node(source);
  auto d = find_node(dest);
  if (!s || !d) return false;
  return triples_.count(triple_key(*s, *d, c)) != 0;
}

FlowGraph FlowGraph::with_edges(std::vector<FlowEdge> edges) const {
  return FlowGraph(nodes_, std::move(edges));
}

std::vector<std::size_t> FlowGraph::canonical_edge_order() const {
  std::vector<std::size_t> order(edges_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = edges_[a];
    const auto& y = edges_[b];
    if (x.source != y.source) return x.source < y.source;
    if (x.dest != y.dest) return x.dest < y.dest;
    return x.commodity < y.commodity;
  });
  return order;
}

namespace {
std::string pair_key(std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  std::string key(a);
  key += '|';
  key += b;
  return key;
}
}  // namespace

void AdjacencyMap::add(std::string_view a, std::string_view b) {
  if (a != b) pairs_.insert(pair_key(a, b));
}

bool AdjacencyMap::adjacent(std::string_view a, std::string_view b) const {
  return a == b || pairs_.count(pair_key(a, b)) != 0;
}

}  // namespace flee
