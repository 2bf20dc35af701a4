#include "flee/flowgraph/ingest.hpp"

#include <algorithm>
#include <cctype>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"

namespace flee {
namespace {

[[noreturn]] void schema_error(const std::filesystem::path& file, std::size_t row, std::string_view column,
                               std::string_view why) {
  fail(ErrorKind::SchemaViolation, file.filename().string() + ": row " + std::to_string(row) + ", column " +
                                       std::string(column) + ": " + std::string(why));
}

bool is_state_code(std::string_view id) {
  return id.size() == 2 && std::isupper(static_cast<unsigned char>(id[0])) &&
         std::isupper(static_cast<unsigned char>(id[1]));
}

double number_cell(const std::filesystem::path& file, std::size_t row, std::string_view column,
                   std::string_view text, bool nonnegative) {
  double v = 0.0;
  if (!parse_double(text, v)) schema_error(file, row, column, "not a decimal number");
  if (nonnegative && v < 0.0) schema_error(file, row, column, "negative");
  return v;
}

std::vector<NodeRecord> read_nodes(const std::filesystem::path& nodes_csv) {
  const auto table = read_csv(nodes_csv, {"id", "lat", "lon", "region"});
  std::vector<NodeRecord> nodes;
  nodes.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    NodeRecord n;
    n.id = row[0];
    if (!is_state_code(n.id)) schema_error(nodes_csv, line, "id", "expected a 2-letter uppercase code");
    n.lat = number_cell(nodes_csv, line, "lat", row[1], false);
    n.lon = number_cell(nodes_csv, line, "lon", row[2], false);
    if (n.lat < -90.0 || n.lat > 90.0) schema_error(nodes_csv, line, "lat", "outside [-90, 90]");
    if (n.lon < -180.0 || n.lon > 180.0) schema_error(nodes_csv, line, "lon", "outside [-180, 180]");
    try {
      n.region = parse_region(row[3]);
    } catch (const Error&) {
      schema_error(nodes_csv, line, "region", "unknown region '" + row[3] + "'");
    }
    if (std::any_of(nodes.begin(), nodes.end(), [&](const NodeRecord& o) { return o.id == n.id; })) {
      schema_error(nodes_csv, line, "id", "duplicate id " + n.id);
    }
    nodes.push_back(std::move(n));
  }
  return nodes;
}

}  // namespace

std::vector<NodeRecord> ingest_nodes(const std::filesystem::path& nodes_csv) { return read_nodes(nodes_csv); }

FlowGraph flows_from_csv_file(const std::filesystem::path& flows_csv, const std::vector<NodeRecord>& nodes) {
  const auto table = read_csv(flows_csv, {"origin", "dest", "sctg", "value", "tons", "avg_miles"});
  std::vector<FlowEdge> edges;
  edges.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    const auto& sctg = row[2];
    if (sctg.size() != 2 || sctg[0] != '0' || sctg[1] < '1' || sctg[1] > '8') {
      schema_error(flows_csv, line, "sctg", "expected '01'..'08', got '" + sctg + "'");
    }
    FlowEdge e;
    e.source = row[0];
    e.dest = row[1];
    e.commodity = CommodityCode(sctg[1] - '0');
    e.value = number_cell(flows_csv, line, "value", row[3], true);
    e.tonnage = number_cell(flows_csv, line, "tons", row[4], true);
    e.avg_miles = number_cell(flows_csv, line, "avg_miles", row[5], true);
    edges.push_back(std::move(e));
  }
  return FlowGraph(nodes, std::move(edges));
}

FlowGraph ingest_graph(const std::filesystem::path& nodes_csv, const std::filesystem::path& flows_csv) {
  if (!std::filesystem::exists(nodes_csv)) fail(ErrorKind::MissingFile, nodes_csv.string());
  if (!std::filesystem::exists(flows_csv)) fail(ErrorKind::MissingFile, flows_csv.string());
  return flows_from_csv_file(flows_csv, read_nodes(nodes_csv));
}

AdjacencyMap ingest_adjacency(const std::filesystem::path& adjacency_csv, const FlowGraph* g) {
  const auto table = read_csv(adjacency_csv, {"a", "b"});
  AdjacencyMap adj;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (g != nullptr) {
      if (!g->find_node(row[0])) fail(ErrorKind::UnknownNode, row[0]);
      if (!g->find_node(row[1])) fail(ErrorKind::UnknownNode, row[1]);
    }
    adj.add(row[0], row[1]);
  }
  return adj;
}

std::string nodes_to_csv(const FlowGraph& g) {
  std::string out = "id,lat,lon,region\n";
  for (const auto& n : g.nodes()) {
    out += n.id + ',' + format_double(n.lat) + ',' + format_double(n.lon) + ',' + std::string(to_string(n.region)) +
           '\n';
  }
  return out;
}

std::string flows_to_csv(const FlowGraph& g) {
  std::string out = "origin,dest,sctg,value,tons,avg_miles\n";
  for (std::size_t idx : g.canonical_edge_order()) {
    const auto& e = g.edges()[idx];
    out += e.source + ',' + e.dest + ",0" + std::to_string(e.commodity.value()) + ',' + format_double(e.value) +
           ',' + format_double(e.tonnage) + ',' + format_double(e.avg_miles) + '\n';
  }
  return out;
}

}  // namespace flee
