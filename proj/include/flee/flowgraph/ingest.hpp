#pragma once

#include <filesystem>
#include <string>

#include "flee/flowgraph/graph.hpp"

namespace flee {

/// Reads `nodes.csv` (id,lat,lon,region) and `flows.csv`
/// (origin,dest,sctg,value,tons,avg_miles). Throws MissingFile,
/// SchemaViolation, DuplicateFlow or UnknownNode.
FlowGraph ingest_graph(const std::filesystem::path& nodes_csv, const std::filesystem::path& flows_csv);

/// Reads `nodes.csv` alone. Throws MissingFile, SchemaViolation.
std::vector<NodeRecord> ingest_nodes(const std::filesystem::path& nodes_csv);

/// Reads `adjacency.csv` (a,b). Pairs must name nodes of `g` when given.
AdjacencyMap ingest_adjacency(const std::filesystem::path& adjacency_csv, const FlowGraph* g = nullptr);

/// Canonical serializations: rows sorted by id / (origin, dest, sctg),
/// numbers in shortest round-trip form.
std::string nodes_to_csv(const FlowGraph& g);
std::string flows_to_csv(const FlowGraph& g);

/// Parses flows text against an existing node set.
FlowGraph flows_from_csv_file(const std::filesystem::path& flows_csv, const std::vector<NodeRecord>& nodes);

}  // namespace flee
