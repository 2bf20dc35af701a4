#pragma once

#include <filesystem>
#include <functional>
#include <fstream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "flee/core/error.hpp"
#include "flee/core/rng.hpp"
#include "flee/flowgraph/graph.hpp"

namespace flee::test {

inline std::string node_id(std::size_t i) {
  return std::string{static_cast<char>('A' + i / 26), static_cast<char>('A' + i % 26)};
}

inline NodeRecord node(std::string id, Region r = Region::West, double lat = 40.0, double lon = -100.0) {
  return NodeRecord{std::move(id), lat, lon, r};
}

inline FlowEdge edge(std::string s, std::string d, int c, double v, double t, double a) {
  return FlowEdge{std::move(s), std::move(d), CommodityCode(c), v, t, a};
}

struct RandomGraphOptions {
  std::size_t nodes = 6;
  std::size_t edges = 12;
  bool self_loops = true;
  std::size_t regions = 4;
};

/// Random valid graph; ids AA, AB, ...; regions assigned round-robin.
inline FlowGraph random_graph(Rng& rng, const RandomGraphOptions& o) {
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < o.nodes; ++i) {
    nodes.push_back(node(node_id(i), kAllRegions[i % o.regions], rng.uniform(25.0, 49.0), rng.uniform(-124.0, -67.0)));
  }
  std::set<std::tuple<std::size_t, std::size_t, int>> used;
  std::vector<FlowEdge> edges;
  const std::size_t cap = o.nodes * (o.self_loops ? o.nodes : o.nodes - 1) * kCommodityCount;
  while (edges.size() < std::min(o.edges, cap)) {
    const auto s = static_cast<std::size_t>(rng.below(o.nodes));
    const auto d = static_cast<std::size_t>(rng.below(o.nodes));
    if (s == d && !o.self_loops) continue;
    const int c = 1 + static_cast<int>(rng.below(8));
    if (!used.insert({s, d, c}).second) continue;
    edges.push_back(edge(node_id(s), node_id(d), c, rng.uniform(1.0, 500.0), rng.uniform(1.0, 800.0),
                         rng.uniform(0.0, 1500.0)));
  }
  return FlowGraph(nodes, edges);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("flee_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

/// Kind of the flee::Error raised by f; InternalInvariant if it returns normally
/// or throws something else, so a CHECK against any expected kind fails.
inline ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  } catch (...) {
  }
  return ErrorKind::InternalInvariant;
}

inline const std::string kSampleDir = FLEE_SAMPLE_DIR;

}  // namespace flee::test
